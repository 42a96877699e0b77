"""Report documents, rootogram data, and their serialization.

Reports are plain nested dataclasses that convert losslessly to and from
JSON-compatible dictionaries.  Numbers in rendered tables are shown to 4
decimals; the JSON carries full precision.  Values that are negative only
by optimizer rounding (within 1e-8 of zero) are clamped to 0 in the
report, with the raw values retained under ``phi_raw``.
"""

import json
import math
import time
from dataclasses import dataclass

import numpy as np

from . import __version__ as _version

CLAMP_EPS = 1e-8


def clamp_rounding(x):
    """Map values in [-1e-8, 0) to 0.0; everything else passes through."""
    if -CLAMP_EPS <= x < 0.0:
        return 0.0
    return x


def _finite_or_none(x):
    x = float(x)
    return x if math.isfinite(x) else None


@dataclass
class MeasureBlock:
    """One measure's Shapley table within a part report."""

    kind: str
    has_lower_bound: bool
    has_upper_bound_one: bool
    v_grand: float
    v_empty: float
    is_pseudo: bool
    phi: dict
    phi_raw: dict = None
    imp_fm: dict = None
    imp_bm: dict = None
    mc_stderr: dict = None

    def to_dict(self):
        return {
            "kind": self.kind,
            "has_lower_bound": self.has_lower_bound,
            "has_upper_bound_one": self.has_upper_bound_one,
            "v_grand": self.v_grand,
            "v_empty": self.v_empty,
            "is_pseudo": self.is_pseudo,
            "phi": dict(self.phi),
            "phi_raw": dict(self.phi_raw) if self.phi_raw is not None else None,
            "imp_fm": dict(self.imp_fm) if self.imp_fm is not None else None,
            "imp_bm": dict(self.imp_bm) if self.imp_bm is not None else None,
            "mc_stderr": dict(self.mc_stderr) if self.mc_stderr is not None else None,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def measure_block(result):
    """Build a MeasureBlock from a ShapleyResult, sorted by phi descending."""
    order = np.lexsort((result.players, -result.phi))
    names = [result.players[i] for i in order]
    raw = {nm: float(result.phi[i]) for nm, i in zip(names, order)}
    clamped = {nm: clamp_rounding(v) for nm, v in raw.items()}
    any_clamped = any(clamped[nm] != raw[nm] for nm in raw)

    def pick(arr):
        if arr is None:
            return None
        return {nm: float(arr[i]) for nm, i in zip(names, order)}

    return MeasureBlock(
        kind=result.measure.kind,
        has_lower_bound=result.measure.has_lower_bound,
        has_upper_bound_one=result.measure.has_upper_bound_one,
        v_grand=clamp_rounding(result.v_grand),
        v_empty=clamp_rounding(result.v_empty),
        is_pseudo=result.is_pseudo,
        phi=clamped,
        phi_raw=raw if any_clamped else None,
        imp_fm=pick(result.imp_fm),
        imp_bm=pick(result.imp_bm),
        mc_stderr=pick(result.mc_stderr),
    )


@dataclass
class PartReport:
    """One family's analysis: constants plus one block per measure."""

    family: str
    n: int
    players: list
    constants: dict
    n_fits: int
    measures: dict
    mc_samples: int = None
    subsets: list = None

    def to_dict(self):
        return {
            "family": self.family,
            "n": self.n,
            "players": list(self.players),
            "constants": dict(self.constants),
            "n_fits": self.n_fits,
            "measures": {k: v.to_dict() for k, v in self.measures.items()},
            "mc_samples": self.mc_samples,
            "subsets": self.subsets,
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["measures"] = {
            k: MeasureBlock.from_dict(v) for k, v in d["measures"].items()
        }
        return cls(**d)


def part_report(family, ds, results, cache=None, include_subsets=False):
    """Assemble a PartReport from per-measure ShapleyResults of one run."""
    any_result = next(iter(results.values()))
    consts = any_result.constants
    constants = {
        "loglik_null": consts.loglik_null,
        "loglik_sat": consts.loglik_sat,
        "null_deviance": consts.null_deviance,
        "zeta": _finite_or_none(consts.zeta),
        "C": consts.C,
        "lr": any_result.lr,
    }
    subsets = None
    if include_subsets and cache is not None:
        subsets = cache_records(cache, results, ds.player_names)
    return PartReport(
        family=family,
        n=ds.n,
        players=list(ds.player_names),
        constants=constants,
        n_fits=any_result.n_fits,
        measures={k: measure_block(r) for k, r in results.items()},
        mc_samples=any_result.mc_samples,
        subsets=subsets,
    )


def cache_records(cache, results, player_names):
    """One record per subset: mask, member names, loglik, deviance, measures."""
    from .measures import evaluate_array

    p = cache.p
    rows = []
    kinds = list(results.keys())
    per_kind = {
        k: evaluate_array(results[k].measure, cache.loglik, results[k].constants)
        for k in kinds
    }
    for mask in range(len(cache)):
        members = [player_names[i] for i in range(p) if mask >> i & 1]
        row = {
            "mask": mask,
            "players": members,
            "loglik": float(cache.loglik[mask]),
            "deviance": float(cache.deviance[mask]),
        }
        for k in kinds:
            row[k] = float(per_kind[k][mask])
        rows.append(row)
    return rows


@dataclass
class ReportDocument:
    """Top-level analysis report (single family or hurdle)."""

    config: dict
    kind: str  # "single" or "hurdle"
    part: PartReport = None
    binary: PartReport = None
    count: PartReport = None
    n_plus: int = None
    total_loglik: float = None
    version: str = _version
    wall_seconds: float = 0.0
    created_at: str = ""

    def to_dict(self):
        return {
            "config": dict(self.config),
            "kind": self.kind,
            "part": self.part.to_dict() if self.part else None,
            "binary": self.binary.to_dict() if self.binary else None,
            "count": self.count.to_dict() if self.count else None,
            "n_plus": self.n_plus,
            "total_loglik": self.total_loglik,
            "version": self.version,
            "wall_seconds": self.wall_seconds,
            "created_at": self.created_at,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        for key in ("part", "binary", "count"):
            if d.get(key) is not None:
                d[key] = PartReport.from_dict(d[key])
        return cls(**d)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def stamp(doc, started):
    doc.wall_seconds = time.perf_counter() - started
    doc.created_at = time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime())
    return doc


# ---------------------------------------------------------------------------
# rootograms

@dataclass
class RootogramData:
    """Hanging rootogram data on the square-root scale.

    ``hanging_bottom[j] = sqrt(expected[j]) - sqrt(observed[j])`` gives the
    bottom of the bar hanging from the expected curve; bars that fall short
    of zero indicate underprediction of that count.
    """

    counts: list
    observed: list
    expected: list
    sqrt_observed: list
    sqrt_expected: list
    hanging_bottom: list
    n: int
    model: str

    def to_dict(self):
        return {
            "counts": list(self.counts),
            "observed": list(self.observed),
            "expected": list(self.expected),
            "sqrt_observed": list(self.sqrt_observed),
            "sqrt_expected": list(self.sqrt_expected),
            "hanging_bottom": list(self.hanging_bottom),
            "n": self.n,
            "model": self.model,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent, allow_nan=False)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def _assemble_rootogram(y, expected_fn, model, j_max=None):
    y_int = y.astype(int)
    top = int(y_int.max())
    if j_max is not None:
        top = max(top, int(j_max))
    counts = np.arange(top + 1)
    observed = np.bincount(y_int, minlength=top + 1)[: top + 1]
    expected = np.array([expected_fn(j) for j in counts])
    sqrt_obs = np.sqrt(observed)
    sqrt_exp = np.sqrt(expected)
    return RootogramData(
        counts=[int(j) for j in counts],
        observed=[int(o) for o in observed],
        expected=[float(e) for e in expected],
        sqrt_observed=[float(v) for v in sqrt_obs],
        sqrt_expected=[float(v) for v in sqrt_exp],
        hanging_bottom=[float(v) for v in (sqrt_exp - sqrt_obs)],
        n=int(len(y)),
        model=model,
    )


def rootogram_data(y, family, mu, j_max=None):
    """Observed vs expected count frequencies for one fitted model."""
    mu = np.asarray(mu, dtype=float)
    return _assemble_rootogram(
        np.asarray(y), lambda j: float(np.sum(family.pmf(j, mu))), family.name,
        j_max=j_max,
    )


def hurdle_rootogram_data(y, mu_binary, mu_count, j_max=None):
    """Observed vs expected frequencies under a two-part hurdle model.

    ``mu_binary`` is the probability of a positive count per observation;
    ``mu_count`` is the zero-truncated Poisson rate per observation.  The
    zero bin collects 1 - mu_binary; positive bins take the truncated
    count probability scaled by mu_binary.
    """
    from .families import ZT_POISSON

    mu_binary = np.asarray(mu_binary, dtype=float)
    mu_count = np.asarray(mu_count, dtype=float)

    def expected_fn(j):
        if j == 0:
            return float(np.sum(1.0 - mu_binary))
        return float(np.sum(mu_binary * ZT_POISSON.pmf(j, mu_count)))

    return _assemble_rootogram(np.asarray(y), expected_fn, "hurdle", j_max=j_max)


# ---------------------------------------------------------------------------
# plain-text tables

def render_part(part, title=None):
    """Aligned text table per measure, values to 4 decimals."""
    lines = []
    if title:
        lines.append(title)
        lines.append("=" * len(title))
    c = part.constants
    lines.append(
        f"family={part.family}  n={part.n}  players={len(part.players)}  "
        f"fits={part.n_fits}"
    )
    zeta_txt = "n/a" if c["zeta"] is None else f"{c['zeta']:.4f}"
    lines.append(
        f"loglik(null)={c['loglik_null']:.4f}  loglik(sat)={c['loglik_sat']:.4f}  "
        f"null deviance={c['null_deviance']:.4f}"
    )
    lines.append(f"zeta={zeta_txt}  1/C={1.0 / c['C']:.4f}  LR={c['lr']:.4f}")
    for kind, block in part.measures.items():
        lines.append("")
        lines.append(f"measure: {kind}   v(P)={block.v_grand:.4f}   "
                     f"v(empty)={block.v_empty:.4f}")
        header = f"{'player':<16}{'phi':>12}"
        if block.imp_fm is not None:
            header += f"{'impFM':>12}"
        if block.imp_bm is not None:
            header += f"{'impBM':>12}"
        if block.mc_stderr is not None:
            header += f"{'stderr':>12}"
        lines.append(header)
        lines.append("-" * len(header))
        for name, value in block.phi.items():
            row = f"{name:<16}{value:>12.4f}"
            if block.imp_fm is not None:
                row += f"{block.imp_fm[name]:>12.4f}"
            if block.imp_bm is not None:
                row += f"{block.imp_bm[name]:>12.4f}"
            if block.mc_stderr is not None:
                row += f"{block.mc_stderr[name]:>12.4f}"
            lines.append(row)
    return "\n".join(lines)


def render_document(doc):
    if doc.kind == "single":
        return render_part(doc.part)
    total = "n/a" if doc.total_loglik is None else f"{doc.total_loglik:.4f}"
    parts = [
        render_part(doc.binary, title="binary part (logit on positive indicator)"),
        "",
        render_part(doc.count, title="count part (zero-truncated poisson)"),
        "",
        f"n_plus={doc.n_plus}  total hurdle loglik={total}",
    ]
    return "\n".join(parts)
