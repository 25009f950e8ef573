"""Command line driver: ``ddvv-forge <command> --config <path>``.

Exit codes: 0 all checks pass, 1 a verification failed, 2 input or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import expr as ex
from .catalog import CATALOG
from .construction import ChartPoint, GridSpec, phi_jets, sample_grid
from .errors import ConfigError, DdvvError, NullQuadricCurve, RankDeficiency
from .geometry import ddvv_residual, fundamental_forms
from .surface import Domain, HolomorphicCurve, check_isotropy, eval_surface, split
from .transforms import (KINDS, AmbientMap, apply_map, associated_pair_sample, compare_pairs,
                         euclidean_inversion, holo_invert, quadric_classify, quadric_embedded,
                         shape_law_check, space_form_pairing)

COMMANDS = ("isotropy", "build", "verify", "canonical", "transform", "quadric",
            "invert-holo", "theorem4", "catalog")
CONSTRUCTION = ("build", "verify", "canonical", "transform", "theorem4")

DEFAULT_TOLERANCES = {
    "eps_rank": 1e-9,
    "eps_hN": 1e-8,
    "eps_reg": 1e-8,
    "eps_min": 1e-7,
    "tol_eq": 1e-7,
    "tol_canonical": 1e-6,
    "tol_isotropy": 1e-9,
    "tol_shape": 1e-8,
    "tol_theorem4": 1e-6,
    "tol_fiber": 1e-8,
    "tol_involution": 1e-10,
    "tol_quadric": None,
    "max_flagged": 0.05,
}

TOP_KEYS = ("curve", "grid", "tolerances", "transform", "output")


# ------------------------------------------------------------ config

@dataclass
class RunConfig:
    curve: HolomorphicCurve
    grid: GridSpec
    tolerances: dict
    transforms: list = field(default_factory=list)
    output: dict = field(default_factory=dict)
    slice_theta: tuple | None = None

    @property
    def d(self) -> float:
        return self.transforms[0].radius if self.transforms else 1.0


class _SchemaError(ConfigError):
    def __init__(self, path, where, msg):
        super().__init__(f"{path}: {where}: {msg}")
        self.path, self.where, self.msg = path, where, msg


def _fail(path, where, msg):
    raise _SchemaError(path, where, msg)


def _line_of(text: str, where: str) -> int | None:
    """Line of the first occurrence of the innermost key named in ``where``."""
    key = where.split(".")[-1].split("[")[0]
    if key.startswith("<"):
        return None
    pos = text.find(f'"{key}"')
    return text.count("\n", 0, pos) + 1 if pos >= 0 else None


def _pair(value, path, where):
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(x, (int, float)) for x in value) or not value[0] < value[1]):
        _fail(path, where, f"expected [lo, hi] with lo < hi, got {value!r}")
    return (float(value[0]), float(value[1]))


def _parse_domain(raw, path):
    if raw is None:
        return Domain()
    if not isinstance(raw, dict) or raw.get("kind", "plane") not in ("plane", "disk"):
        _fail(path, "curve.domain", "expected {'kind': 'plane'} or {'kind': 'disk', 'radius': r}")
    radius = raw.get("radius", 1.0)
    if not isinstance(radius, (int, float)) or radius <= 0:
        _fail(path, "curve.domain.radius", "must be a positive number")
    return Domain(raw.get("kind", "plane"), float(radius))


def _parse_curve(raw, path):
    if not isinstance(raw, dict):
        _fail(path, "curve", "expected an object")
    if "builtin" in raw:
        name = raw["builtin"]
        if name not in CATALOG:
            _fail(path, "curve.builtin", f"unknown built-in {name!r}; available: {', '.join(CATALOG)}")
        return CATALOG[name].curve(), CATALOG[name]
    comps = raw.get("components")
    if not isinstance(comps, list) or not all(isinstance(c, str) for c in comps):
        _fail(path, "curve.components", "expected a list of expression strings")
    parsed = []
    for k, text in enumerate(comps):
        try:
            parsed.append(ex.parse(text))
        except ex.ExprSyntaxError as err:
            _fail(path, f"curve.components[{k}]", str(err))
    n = raw.get("n", len(parsed) - 2)
    if n != len(parsed) - 2:
        _fail(path, "curve.n", f"n = {n} needs {n + 2} components, got {len(parsed)}")
    if n < 2:
        _fail(path, "curve.n", "n must be at least 2")
    curve = HolomorphicCurve(n, tuple(parsed), _parse_domain(raw.get("domain"), path),
                             str(raw.get("name", "")))
    return curve, None


def _parse_grid(raw, n, entry, path):
    raw = {} if raw is None else raw
    if not isinstance(raw, dict):
        _fail(path, "grid", "expected an object")
    u_default = entry.u_range if entry else (-1.0, 1.0)
    v_default = entry.v_range if entry else (-1.0, 1.0)
    counts = raw.get("n_theta", [8])
    if isinstance(counts, int):
        counts = [counts]
    for key in ("nu", "nv"):
        if key in raw and (not isinstance(raw[key], int) or isinstance(raw[key], bool)):
            _fail(path, f"grid.{key}", "expected an integer")
    if not isinstance(counts, list) or not all(isinstance(k, int) for k in counts):
        _fail(path, "grid.n_theta", "expected an integer or a list of integers")
    return GridSpec(
        n=n,
        u_range=_pair(raw["u_range"], path, "grid.u_range") if "u_range" in raw else tuple(u_default),
        v_range=_pair(raw["v_range"], path, "grid.v_range") if "v_range" in raw else tuple(v_default),
        nu=raw.get("nu", 10),
        nv=raw.get("nv", 10),
        n_theta=tuple(counts),
        jitter=float(raw.get("jitter", 0.0)),
        seed=int(raw.get("seed", 0)),
    )


def _parse_transforms(raw, path):
    if raw is None:
        return []
    items = raw if isinstance(raw, list) else [raw]
    if len(items) > 1:
        _fail(path, "transform", "at most one ambient map per run")
    out = []
    for k, item in enumerate(items):
        where = f"transform[{k}]"
        if not isinstance(item, dict) or item.get("kind") not in KINDS:
            _fail(path, f"{where}.kind", f"expected one of {', '.join(KINDS)}")
        center = item.get("center")
        try:
            out.append(AmbientMap(item["kind"], float(item.get("radius", 1.0)),
                                  None if center is None else tuple(float(x) for x in center),
                                  item.get("sign")))
        except (TypeError, ValueError) as err:
            _fail(path, where, str(err))
    return out


def load_config(path: str, seed: int | None = None) -> RunConfig:
    """Parse and validate a JSON run configuration."""
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as err:
        raise ConfigError(f"{path}: cannot read config ({err.strerror})") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None
    try:
        return _build_config(path, raw, seed)
    except _SchemaError as err:
        line = _line_of(text, err.where)
        loc = f"{path}:{line}" if line else path
        raise ConfigError(f"{loc}: {err.where}: {err.msg}") from None


def _build_config(path, raw, seed) -> RunConfig:
    if not isinstance(raw, dict):
        _fail(path, "<root>", "expected an object")
    unknown = sorted(set(raw) - set(TOP_KEYS))
    if unknown:
        _fail(path, "<root>", f"unknown keys {unknown}; allowed: {', '.join(TOP_KEYS)}")
    if "curve" not in raw:
        _fail(path, "curve", "missing")
    curve, entry = _parse_curve(raw["curve"], path)
    grid = _parse_grid(raw.get("grid"), curve.n, entry, path)
    if seed is not None:
        grid = replace(grid, seed=seed)
    tol = dict(DEFAULT_TOLERANCES)
    extra = raw.get("tolerances", {}) or {}
    if not isinstance(extra, dict):
        _fail(path, "tolerances", "expected an object")
    for key, value in extra.items():
        if key not in tol:
            _fail(path, f"tolerances.{key}", f"unknown tolerance; allowed: {', '.join(tol)}")
        if value is not None and (not isinstance(value, (int, float)) or value < 0):
            _fail(path, f"tolerances.{key}", "expected a non-negative number")
        tol[key] = value
    output = raw.get("output", {}) or {}
    if not isinstance(output, dict):
        _fail(path, "output", "expected an object")
    slice_theta = (raw.get("grid") or {}).get("slice_theta")
    return RunConfig(curve, grid, tol, _parse_transforms(raw.get("transform"), path), output,
                     None if slice_theta is None else tuple(float(t) for t in slice_theta))


# ------------------------------------------------------------ per-sample work

def _clean(x):
    if isinstance(x, float):
        return None if math.isnan(x) or math.isinf(x) else x
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return _clean(x.item())
    return x


def _phi(curve, p, pivot, tol):
    kw = dict(eps_reg=tol["eps_reg"], eps_hN=tol["eps_hN"], eps_rank=tol["eps_rank"])
    try:
        return phi_jets(curve, p, pivot=pivot, **kw), False
    except RankDeficiency:
        if pivot is None:
            raise
        return phi_jets(curve, p, pivot=None, **kw), True


def _ddvv_fields(sd, tol):
    rep = ddvv_residual(sd, eps_min=tol["eps_min"], tol=tol["tol_canonical"])
    return {
        "s": rep.s, "sN": rep.sN, "H2": rep.H2, "residual": rep.residual,
        "lam": rep.lam, "mu": rep.mu, "canonical_residual": rep.canonical_residual,
        "minimal": rep.minimal, "umbilic": rep.umbilic, "degenerate": rep.degenerate,
    }


def _evaluate(task):
    """One chart point; returns a SampleRecord dict (errors are recorded, not raised)."""
    mode, curve, p, pivot, tol, m = task
    rec = {"point": {"u": p.u, "v": p.v, "theta": list(p.theta)}, "error": None}
    try:
        pj, local = _phi(curve, p, pivot, tol)
        rec["phi"] = pj.phi.val.tolist()
        rec["rank_margin"] = pj.rank_margin
        rec["flags"] = {"regular": bool(pj.regular), "local_pivot": local}
        if mode == "pair":
            smp = associated_pair_sample(curve, m, p, pivot=None if local else pivot,
                                         tol=tol["tol_canonical"])
            rec["pair"] = {"g": smp.g.tolist(), "h": smp.h.tolist(), "lam": smp.lam, "mu": smp.mu}
            return rec, smp
        sd = fundamental_forms(pj.phi, eps_reg=tol["eps_reg"])
        fields = _ddvv_fields(sd, tol)
        for key in ("minimal", "umbilic", "degenerate"):
            rec["flags"][key] = fields.pop(key)
        rec.update(fields)
        if mode == "transform":
            rec["transformed"] = _transformed_fields(m, pj, sd, tol)
    except (DdvvError, ArithmeticError, np.linalg.LinAlgError) as err:
        rec["error"] = f"{type(err).__name__}: {err}"
    return rec, None


def _transformed_fields(m, pj, before, tol):
    x = pj.phi.val
    if m.kind in ("stereo_plane_to_sphere", "stereo_ball_to_hyp"):
        x = np.append(x, 0.0)
    P0, _, _ = m.inversion(len(x))
    out = {"origin_margin": float(np.linalg.norm(x - P0))}
    try:
        mapped = apply_map(m, pj.phi)
        after = fundamental_forms(mapped, signature=m.signature, eps_reg=tol["eps_reg"])
        out["phi"] = mapped.val.tolist()
        fields = _ddvv_fields(after, tol)
        out.update(fields)
        if m.kind in ("euclidean_inversion", "lorentz_inversion"):
            out["shape_law"] = shape_law_check(m, before, after)
        else:
            out["shape_law"] = None
        out["error"] = None
    except (DdvvError, ArithmeticError, np.linalg.LinAlgError) as err:
        out["error"] = f"{type(err).__name__}: {err}"
    return out


def frozen_pivot(curve: HolomorphicCurve, grid: GridSpec, tol: dict):
    """Frame pivot chosen once at the grid center; None if that point is singular."""
    z = complex(0.5 * sum(grid.u_range), 0.5 * sum(grid.v_range))
    try:
        return split(eval_surface(curve, z, m=curve.n), eps_hN=tol["eps_hN"],
                     eps_rank=tol["eps_rank"]).pivot
    except (DdvvError, ArithmeticError, np.linalg.LinAlgError):
        return None


def run_samples(mode, cfg: RunConfig, points, workers: int = 1, pivot="auto"):
    """Evaluate ``points`` in order, in parallel when ``workers > 1``."""
    if pivot == "auto":
        pivot = frozen_pivot(cfg.curve, cfg.grid, cfg.tolerances)
    m = cfg.transforms[0] if cfg.transforms else None
    if mode == "pair":
        m = euclidean_inversion(cfg.d)
    tasks = [(mode, cfg.curve, p, pivot, cfg.tolerances, m) for p in points]
    if workers <= 1 or len(tasks) < 2:
        return [_evaluate(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate, tasks, chunksize=chunk))


# ------------------------------------------------------------ reporting

@dataclass
class Outcome:
    ok: bool
    lines: list
    payload: object = None
    input_error: bool = False


def _fmt_point(pt):
    if pt is None:
        return "n/a"
    if isinstance(pt, ChartPoint):
        pt = {"u": pt.u, "v": pt.v, "theta": list(pt.theta)}
    if isinstance(pt, dict):
        theta = ", ".join(f"{t:.6g}" for t in pt["theta"])
        return f"(u={pt['u']:.6g}, v={pt['v']:.6g}, theta=({theta}))"
    return f"z={complex(pt):.6g}"


def check_line(command, criterion, value, tol, worst=None, extra=""):
    ok = value is not None and value <= tol
    status = "PASS" if ok else "FAIL"
    shown = "n/a" if value is None else f"{value:.3e}"
    line = f"{status} {command} [{criterion}]: {shown} <= {tol:.1e}" if ok else \
        f"{status} {command} [{criterion}]: worst at {_fmt_point(worst)}: {shown} vs tolerance {tol:.1e}"
    if extra:
        line += f" ({extra})"
    return ok, line


def _dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True)


def write_ndjson(records, path):
    text = "".join(_dumps(r) + "\n" for r in records)
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def write_obj(cfg: RunConfig, path: str, workers: int = 1):
    """Triangulated (u, v) grid of phi at fixed fiber angles; first 3 coordinates."""
    g = cfg.grid
    us = np.linspace(*g.u_range, g.nu)
    vs = np.linspace(*g.v_range, g.nv)
    theta = cfg.slice_theta or tuple([0.25 * 2 * np.pi / g.n_theta[0]] + [0.5 * np.pi] * (cfg.curve.n - 3))
    pts = [ChartPoint(float(u), float(v), theta, cfg.curve.n) for u in us for v in vs]
    recs = run_samples("sample", cfg, pts, workers)
    index, lines, count = {}, [f"# ddvv-forge slice theta={list(theta)}"], 0
    for k, (rec, _) in enumerate(recs):
        if rec["error"] is None:
            count += 1
            index[k] = count
            x, y, z = (rec["phi"] + [0.0, 0.0])[:3]
            lines.append(f"v {x:.12g} {y:.12g} {z:.12g}")
    for i in range(g.nu - 1):
        for j in range(g.nv - 1):
            a, b, c, d = i * g.nv + j, (i + 1) * g.nv + j, (i + 1) * g.nv + j + 1, i * g.nv + j + 1
            for tri in ((a, b, c), (a, c, d)):
                if all(t in index for t in tri):
                    lines.append("f " + " ".join(str(index[t]) for t in tri))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return count


def _grid_points(cfg):
    return sample_grid(cfg.grid, cfg.curve.domain)


def _base_samples(cfg):
    seen, out = set(), []
    for p in _grid_points(cfg):
        if p.z not in seen:
            seen.add(p.z)
            out.append(p.z)
    return out


def _valid(records):
    return [r for r in records if r["error"] is None and r["flags"]["regular"]]


def _worst(records, key):
    best = None
    for r in records:
        v = key(r)
        if v is not None and not (isinstance(v, float) and math.isnan(v)) and (best is None or v > best[0]):
            best = (v, r["point"])
    return best if best else (None, None)


def _error_summary(records):
    counts = {}
    for r in records:
        if r["error"]:
            name = r["error"].split(":")[0]
            counts[name] = counts.get(name, 0) + 1
    return ", ".join(f"{k} x{v}" for k, v in sorted(counts.items()))


def _sample_line(command, records):
    valid = _valid(records)
    errs = _error_summary(records)
    return f"{command}: {len(records)} samples, {len(valid)} regular" + (f", errors: {errs}" if errs else "")


# ------------------------------------------------------------ commands

def cmd_isotropy(cfg: RunConfig, workers: int = 1) -> Outcome:
    rep = check_isotropy(cfg.curve, _base_samples(cfg))
    t = cfg.tolerances
    ok1, l1 = check_line("isotropy", "max |<<G',G'>>|", rep.max_isotropy, t["tol_isotropy"], rep.worst_z)
    ok2 = rep.min_speed > t["eps_rank"]
    l2 = f"{'PASS' if ok2 else 'FAIL'} isotropy [immersion]: min |G'| = {rep.min_speed:.3e} vs eps_rank {t['eps_rank']:.1e}"
    return Outcome(ok1 and ok2, [l1, l2], {"max_isotropy": rep.max_isotropy, "max_relative": rep.max_relative,
                                           "min_speed": rep.min_speed})


def cmd_build(cfg: RunConfig, workers: int = 1) -> Outcome:
    recs = [r for r, _ in run_samples("sample", cfg, _grid_points(cfg), workers)]
    valid = _valid(recs)
    ok = bool(valid)
    line = f"{'PASS' if ok else 'FAIL'} build [regular-samples]: " + _sample_line("build", recs)
    return Outcome(ok, [line], recs)


def cmd_verify(cfg: RunConfig, workers: int = 1) -> Outcome:
    recs = [r for r, _ in run_samples("sample", cfg, _grid_points(cfg), workers)]
    valid = _valid(recs)
    value, pt = _worst(valid, lambda r: abs(r["residual"]) / max(1.0, abs(r["s"])))
    ok, line = check_line("verify", "ddvv-equality |residual|/max(1,|s|)", value, cfg.tolerances["tol_eq"], pt)
    return Outcome(ok, [_sample_line("verify", recs), line], recs)


def cmd_canonical(cfg: RunConfig, workers: int = 1) -> Outcome:
    recs = [r for r, _ in run_samples("sample", cfg, _grid_points(cfg), workers)]
    valid = _valid(recs)
    t = cfg.tolerances
    value, pt = _worst(valid, lambda r: r["canonical_residual"])
    ok1, l1 = check_line("canonical", "canonical-frame residual", value, t["tol_canonical"], pt)
    flagged = [r for r in valid if any(r["flags"][k] for k in ("minimal", "umbilic", "degenerate"))]
    frac = len(flagged) / len(valid) if valid else 1.0
    first = flagged[0]["point"] if flagged else None
    ok2, l2 = check_line("canonical", "flagged fraction (minimal/umbilic/degenerate)", frac, t["max_flagged"], first)
    lines = [_sample_line("canonical", recs), l1, l2]
    if valid:
        lam = [abs(r["lam"]) for r in valid if r["lam"] is not None]
        mu = [r["mu"] for r in valid if r["mu"] is not None and not math.isnan(r["mu"])]
        if lam and mu:
            lines.insert(1, f"canonical: |lambda| in [{min(lam):.4g}, {max(lam):.4g}], mu in [{min(mu):.4g}, {max(mu):.4g}]")
    return Outcome(ok1 and ok2, lines, recs)


def cmd_transform(cfg: RunConfig, workers: int = 1) -> Outcome:
    if not cfg.transforms:
        return Outcome(False, ["transform: config has no transform entry"], input_error=True)
    m = cfg.transforms[0]
    recs = [r for r, _ in run_samples("transform", cfg, _grid_points(cfg), workers)]
    valid = [r for r in _valid(recs) if r["transformed"]["error"] is None]
    t = cfg.tolerances
    lines = [_sample_line("transform", recs) + f", {len(valid)} mapped"]
    value, pt = _worst(valid, lambda r: abs(r["transformed"]["residual"]) / max(1.0, abs(r["transformed"]["s"])))
    ok, line = check_line("transform", f"ddvv-equality after {m.kind}", value, t["tol_eq"], pt)
    lines.append(line)
    if m.kind in ("euclidean_inversion", "lorentz_inversion"):
        value, pt = _worst(valid, lambda r: r["transformed"]["shape_law"])
        ok2, line = check_line("transform", "shape-law residual", value, t["tol_shape"], pt)
        ok = ok and ok2
        lines.append(line)
    tr = [r["transformed"] for r in valid
          if r["transformed"]["mu"] is not None and not math.isnan(r["transformed"]["mu"])]
    austere = sum(abs(x["lam"]) <= 1e-6 * (abs(x["lam"]) + x["mu"]) for x in tr)
    lines.append(f"transform: austere (|lam| <= 1e-6 (|lam| + mu)) at {austere}/{len(tr)} mapped samples")
    margin, _ = _worst(valid, lambda r: -r["transformed"]["origin_margin"])
    if margin is not None:
        lines.append(f"transform: min distance of phi to the inversion center = {-margin:.4g}")
    return Outcome(ok, lines, recs)


def cmd_quadric(cfg: RunConfig, workers: int = 1) -> Outcome:
    d = cfg.d
    cls = quadric_classify(cfg.curve, _base_samples(cfg), d, cfg.tolerances["tol_quadric"])
    line = f"PASS quadric [classification]: k = {cls.label}" + (
        f" (max deviation {cls.max_deviation:.3e})" if cls.k is not None else f" (spread {cls.max_deviation:.3e})")
    payload = {"k": cls.k, "label": cls.label, "max_deviation": cls.max_deviation, "d": d}
    emb = quadric_embedded(cfg.curve, _base_samples(cfg), d)
    payload["embedded"] = emb
    lines = [line, f"quadric: C^(n+3) embedding <<G - P0, G - P0>> defect S_d {emb['S_d']:.3e}, H_d {emb['H_d']:.3e}"]
    if cls.k not in (None, 0.0) and cfg.curve.n >= 3:
        pts = _grid_points(cfg)[:: max(1, len(_grid_points(cfg)) // 12)][:12]
        try:
            pr = space_form_pairing(cfg.curve, d, pts)
            payload["pairing"] = {"observed": pr.observed, "sphere": pr.sphere, "hyperbolic": pr.hyperbolic}
            lines.append(f"quadric: observed pairing k = {cls.label} <-> {pr.observed} "
                         f"(minimality residual S_d {pr.sphere:.3e}, H_d {pr.hyperbolic:.3e})")
        except (DdvvError, ArithmeticError, np.linalg.LinAlgError) as err:
            lines.append(f"quadric: pairing not determined ({type(err).__name__}: {err})")
    return Outcome(True, lines, payload)


def curve_spec(c: HolomorphicCurve) -> dict:
    dom = {"kind": c.domain.kind}
    if c.domain.kind == "disk":
        dom["radius"] = c.domain.radius
    return {"curve": {"n": c.n, "components": c.texts(), "domain": dom, "name": c.name}}


def cmd_invert_holo(cfg: RunConfig, workers: int = 1) -> Outcome:
    d = cfg.d
    samples = _base_samples(cfg)
    try:
        inv = holo_invert(cfg.curve, d, samples)
    except NullQuadricCurve as err:
        return Outcome(False, [f"invert-holo: {err}"], input_error=True)
    rep = check_isotropy(inv, samples)
    t = cfg.tolerances
    ok1, l1 = check_line("invert-holo", "isotropy of T_d o G", rep.max_isotropy, t["tol_isotropy"], rep.worst_z)
    twice = holo_invert(inv, d, samples)
    errs = [(np.linalg.norm(twice.value(z) - cfg.curve.value(z)) / max(1.0, np.linalg.norm(cfg.curve.value(z))), z)
            for z in samples]
    worst = max(errs, key=lambda e: e[0])
    ok2, l2 = check_line("invert-holo", "double inversion", float(worst[0]), t["tol_involution"], worst[1])
    return Outcome(ok1 and ok2, [l1, l2], curve_spec(inv))


def cmd_theorem4(cfg: RunConfig, workers: int = 1) -> Outcome:
    d = cfg.d
    samples = _base_samples(cfg)
    cls = quadric_classify(cfg.curve, samples, d, cfg.tolerances["tol_quadric"])
    if cls.k == 0.0:
        return Outcome(False, ["theorem4: <<G,G>> vanishes identically; T_d o G is undefined"], input_error=True)
    results = run_samples("pair", cfg, _grid_points(cfg), workers)
    recs = [r for r, _ in results]
    pairs = [s for _, s in results if s is not None]
    lines = [f"theorem4: {len(recs)} samples, {len(pairs)} leaf pairs"
             + (f", errors: {_error_summary(recs)}" if _error_summary(recs) else "")]
    if not pairs:
        lines.append("FAIL theorem4 [samples]: no usable sample")
        return Outcome(False, lines, recs)
    rep = compare_pairs(cfg.curve, d, pairs)
    t = cfg.tolerances
    ok1, l1 = check_line("theorem4", "fiber constancy of g~", rep.fiber_spread, t["tol_fiber"])
    ok2, l2 = check_line("theorem4", "(g~, h~) vs (Re, -Im) of T_d o G", rep.residual, t["tol_theorem4"],
                         rep.worst_point, extra=f"best convention {rep.convention}")
    others = ", ".join(f"{k}: {v:.3e}" for k, v in rep.residuals.items())
    lines += [l1, l2, f"theorem4: residual by convention {others}"]
    payload = {"convention": list(rep.convention), "residual": rep.residual, "fiber_spread": rep.fiber_spread,
               "residuals": {str(k): v for k, v in rep.residuals.items()}, "count": rep.count}
    return Outcome(ok1 and ok2, lines, payload)


def cmd_catalog() -> Outcome:
    lines = []
    for e in CATALOG.values():
        lines.append(f"{e.name} (n = {e.n}): {', '.join(e.components)}")
        lines.append(f"    box u in {list(e.u_range)}, v in {list(e.v_range)}; {e.note}")
    payload = {e.name: {"n": e.n, "components": list(e.components), "u_range": list(e.u_range),
                        "v_range": list(e.v_range), "note": e.note} for e in CATALOG.values()}
    return Outcome(True, lines, payload)


HANDLERS = {
    "isotropy": cmd_isotropy, "build": cmd_build, "verify": cmd_verify, "canonical": cmd_canonical,
    "transform": cmd_transform, "quadric": cmd_quadric, "invert-holo": cmd_invert_holo,
    "theorem4": cmd_theorem4,
}


# ------------------------------------------------------------ entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ddvv-forge",
                                 description="Build and verify DDVV equality submanifolds from holomorphic curves.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON run configuration (not needed for 'catalog')")
    ap.add_argument("--out", help="output path; '-' for stdout")
    ap.add_argument("--workers", type=int, default=None, help="worker processes (default: CPU count)")
    ap.add_argument("--seed", type=int, default=None, help="override grid.seed")
    return ap


def _emit(outcome: Outcome, command: str, cfg: RunConfig | None, out: str | None, workers: int):
    stream = sys.stdout
    if command in ("build", "verify", "canonical", "transform"):
        path = out or (cfg.output.get("samples") if cfg else None)
        if command == "build" or path:
            if path in (None, "-"):
                stream = sys.stderr
            write_ndjson(outcome.payload, path)
        obj = cfg.output.get("obj") if cfg else None
        if command == "build" and obj:
            count = write_obj(cfg, obj, workers)
            outcome.lines.append(f"build: wrote {count} slice vertices to {obj}")
    elif outcome.payload is not None:
        key = {"invert-holo": "curve", "catalog": None}.get(command, "report")
        path = out or (cfg.output.get(key) if cfg and key else None)
        if path:
            text = json.dumps(_clean(outcome.payload), sort_keys=True, indent=2) + "\n"
            if path == "-":
                sys.stdout.write(text)
                stream = sys.stderr
            else:
                with open(path, "w") as fh:
                    fh.write(text)
    for line in outcome.lines:
        print(line, file=stream)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    workers = args.workers if args.workers is not None else (os.cpu_count() or 1)
    if workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return 2
    if args.command == "catalog":
        outcome = cmd_catalog()
        _emit(outcome, "catalog", None, args.out, workers)
        return 0
    if not args.config:
        print(f"error: '{args.command}' requires --config", file=sys.stderr)
        return 2
    try:
        cfg = load_config(args.config, args.seed)
        if args.command in CONSTRUCTION:
            if cfg.curve.n < 3:
                raise ConfigError(f"{args.config}: curve.n: construction commands need n >= 3")
            iso = check_isotropy(cfg.curve, _base_samples(cfg))
            if not iso.passes(cfg.tolerances["tol_isotropy"], cfg.tolerances["eps_rank"]):
                raise ConfigError(f"{args.config}: curve: not an isotropic immersion "
                                  f"(max |<<G',G'>>| = {iso.max_isotropy:.3e}, min |G'| = {iso.min_speed:.3e})")
        outcome = HANDLERS[args.command](cfg, workers)
    except (ConfigError, DdvvError, ex.ExprSyntaxError) as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 2
    if outcome.input_error:
        for line in outcome.lines:
            print(f"error: {line}", file=sys.stderr)
        return 2
    try:
        _emit(outcome, args.command, cfg, args.out, workers)
    except OSError as err:
        print(f"error: cannot write output ({err})", file=sys.stderr)
        return 2
    return 0 if outcome.ok else 1


if __name__ == "__main__":
    sys.exit(main())
