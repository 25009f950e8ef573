"""Built-in isotropic holomorphic curves.

Each entry fixes the components, the parameter domain and a default
sampling box away from the points where h or h^N vanishes.  The n = 4
variants append a second isotropic pair to the n = 3 ones.
"""

from __future__ import annotations

from dataclasses import dataclass

from .surface import Domain, HolomorphicCurve


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    components: tuple
    u_range: tuple = (0.2, 0.9)
    v_range: tuple = (0.1, 0.6)
    domain: Domain = Domain()
    note: str = ""

    @property
    def n(self) -> int:
        return len(self.components) - 2

    def curve(self) -> HolomorphicCurve:
        return HolomorphicCurve.from_strings(self.components, domain=self.domain, name=self.name)


_ENTRIES = (
    CatalogEntry(
        "enneper-pair",
        ("z/2 - z^3/6", "i*(z/2 + z^3/6)", "z^2/2", "z^2/2", "i*z^2/2"),
        note="Enneper-type pair, <<G,G>> = -z^4/12",
    ),
    CatalogEntry(
        "helicoid-pair",
        ("cos(z)", "sin(z)", "-i*z", "exp(z)", "i*exp(z)"),
        note="helicoid with an exponential isotropic pair, <<G,G>> = 1 - z^2",
    ),
    CatalogEntry(
        "null-exp",
        ("exp(z)", "i*exp(z)", "exp(-z)", "i*exp(-z)", "0"),
        note="<<G,G>> = 0 identically",
    ),
    CatalogEntry(
        "enneper-pair-4",
        ("z/2 - z^3/6", "i*(z/2 + z^3/6)", "cos(z) + z*sin(z)", "sin(z) - z*cos(z)",
         "z^2/2", "i*z^2/2"),
        note="n = 4 Enneper-type pair, <<G,G>> = 1 + z^2 - z^4/6",
    ),
    CatalogEntry(
        "helicoid-pair-4",
        ("cos(z)", "sin(z)", "i*sinh(z)", "cosh(z)", "exp(z)", "i*exp(z)"),
        note="n = 4 helicoid-type pair, <<G,G>> = 2",
    ),
    CatalogEntry(
        "null-exp-4",
        ("exp(z)", "i*exp(z)", "exp(-z)", "i*exp(-z)", "exp(2*z)/2", "i*exp(2*z)/2"),
        note="n = 4, <<G,G>> = 0 identically",
    ),
)

CATALOG = {e.name: e for e in _ENTRIES}


def builtin(name: str) -> HolomorphicCurve:
    try:
        return CATALOG[name].curve()
    except KeyError:
        raise KeyError(f"unknown built-in {name!r}; available: {', '.join(CATALOG)}") from None


def catalog_names() -> list:
    return list(CATALOG)
