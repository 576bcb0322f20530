"""Identity suites: configuration, task enumeration, and a deterministic parallel runner."""

from __future__ import annotations

import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

from . import crosscheck, flag_algebra as fa, minor_calculus as mc, skewfield_eval as sk
from .report import IdentityReport, ResourceGuard, residual_summary, stopwatch
from .series_ring import INF, series_relation_residual
from .yangian_core import Element, defining_relation_residual, normal_form, normal_form_randomized

__all__ = ["ConfigError", "SuiteConfig", "FAMILY_GROUPS", "all_families", "plan", "run_task", "run_suite",
           "summary_table", "report_line"]

MAX_N, MAX_ORDER = 4, 6
FLAG_ORDER = 3


class ConfigError(ValueError):
    """Invalid suite configuration."""


@dataclass(frozen=True)
class SuiteConfig:
    n: int = 3
    order: int = 4
    gamma: tuple | None = None
    seed: int = 0
    eval_k: tuple = (1, 2, 3)
    families: tuple | None = None
    jobs: int = 1
    strict_windows: bool = False
    points: int = 20
    retries: int = sk.RETRY_BUDGET
    allow_large: bool = False

    def __post_init__(self):
        if self.n < 1 or self.order < 1:
            raise ConfigError("n and order must be positive")
        if not self.allow_large and (self.n > MAX_N or self.order > MAX_ORDER):
            raise ConfigError(f"n <= {MAX_N} and order <= {MAX_ORDER} unless --allow-large is given")
        if self.gamma is not None:
            if not self.gamma or any(g <= 0 for g in self.gamma):
                raise ConfigError(f"gamma parts must be positive, got {self.gamma}")
            if sum(self.gamma) != self.n:
                raise ConfigError(f"gamma {','.join(map(str, self.gamma))} sums to {sum(self.gamma)}, not n={self.n}")
        if not self.eval_k or any(not 1 <= k <= 4 for k in self.eval_k):
            raise ConfigError("eval-k values must lie in 1..4")
        if self.jobs < 1 or self.points < 1 or self.retries < 0:
            raise ConfigError("jobs and points must be >= 1, retries >= 0")
        if self.families is not None:
            unknown = [f for f in self.families if f not in FAMILY_GROUPS and f not in all_families()]
            if unknown:
                raise ConfigError(f"unknown families: {', '.join(unknown)}")

    @property
    def composition(self):
        return self.gamma if self.gamma is not None else (1,) * self.n

    def selected(self):
        if not self.families:
            return all_families()
        out = []
        for f in self.families:
            for g in FAMILY_GROUPS.get(f, (f,)):
                if g not in out:
                    out.append(g)
        return out


# -- task enumeration ----------------------------------------------------------

def _compositions(n):
    return sk._compositions(n)


def _sets(n, d):
    return list(itertools.combinations(range(1, n + 1), d))


def _plan_defining(cfg):
    return [dict(i=i, j=j, k=k, l=l) for i, j, k, l in itertools.product(range(1, cfg.n + 1), repeat=4)]


def _plan_confluence(cfg):
    return [dict(word_seed=s) for s in range(cfg.points)]


def _plan_minor(name):
    def plan_(cfg):
        size = 3 if name in ("rows_equals_cols", "alternating") else 2
        return mc.enumerate_params(name, cfg.n, size)
    return plan_


def _plan_skew(name):
    def plan_(cfg):
        return [dict(p, eval_k=k) for p in sk.enumerate_skew_params(name, cfg.n) for k in cfg.eval_k]
    return plan_


def _plan_oracle(name):
    def plan_(cfg):
        return sk.enumerate_oracle_params(name, cfg.n)
    return plan_


def _plan_flag_bialgebra(cfg):
    return [dict(kind=k) for k in ("unit", "counit", "coassociativity", "algebra_map")]


def _plan_minor_coproduct(cfg):
    out = []
    for d in range(1, min(2, cfg.n) + 1):
        for I in itertools.permutations(range(1, cfg.n + 1), d):
            out += [dict(I=I, J=J) for J in _sets(cfg.n, d)]
    return out


def _plan_coaction(cfg):
    out = []
    for tilde in (False, True):
        for d in range(1, cfg.n + 1):
            out += [dict(kind=k, d=d, tilde=tilde) for k in ("coaction_law", "counit")]
        for d in range(2, min(3, cfg.n) + 1):
            out += [dict(kind="alternating", I=I, tilde=tilde) for I in _sets(cfg.n, d)]
    return out


def _plan_sigma(cfg):
    return [dict(e=e, p=p) for e in range(1, cfg.n) for p in range(1, cfg.n - e + 1)]


def _plan_mu(cfg):
    return [dict(d=d, p=p) for d in range(2, cfg.n + 1) for p in range(1, d)]


def _young_params(n, lengths=(0, 1), ordered=True):
    """Y-relation shapes; ``ordered`` keeps only d = |I| + p <= e = |J| - p."""
    out = []
    for p in (1, 2):
        for m in lengths:
            for size in range(p + 1, n + 1):
                if ordered and m + p > size - p:
                    continue
                for I in itertools.permutations(range(1, n + 1), m):
                    out += [dict(p=p, I=I, J=J) for J in _sets(n, size)]
    return out


def _plan_young(cfg):
    return _young_params(cfg.n, lengths=(1,), ordered=False)


def _plan_flag_model(cfg):
    comp = fa.Composition(cfg.composition)
    sizes = [s for s in comp.partial_sums if s <= min(cfg.n, 2)]
    out = []
    for d in sizes:
        for I in _sets(cfg.n, d):
            for perm in itertools.permutations(range(d)):
                if perm != tuple(range(d)):
                    out.append(dict(family="A", I=I, sigma=perm))
    for d in sizes:
        for e in sizes:
            if d <= e:
                out += [dict(family="C", I=I, J=J) for I in _sets(cfg.n, d) for J in _sets(cfg.n, e)]
                out += [dict(family="M", I=I, J=J) for I in _sets(cfg.n, d) for J in _sets(cfg.n, e)]
    for prm in _young_params(cfg.n):
        d, e = len(prm["I"]) + prm["p"], len(prm["J"]) - prm["p"]
        if comp.allows(d) and comp.allows(e) and e >= 1 and d <= 2 and e <= 2:
            out.append(dict(prm, family="Y"))
    return out


def _plan_c_ideal(cfg):
    return [dict(N=N) for N in range(2, min(cfg.order, FLAG_ORDER) + 1)]


def _plan_action(cfg):
    kinds = [f"well_defined_case{c}" for c in (1, 2, 3, 4)] + [f"respects_{x}" for x in "AYMC"]
    out = [dict(kind=k) for k in kinds]
    out += [dict(kind="highest_weight", gamma=g) for g in _compositions(cfg.n)]
    return out


# -- task runners ---------------------------------------------------------------

def _run_defining(cfg, i, j, k, l):
    top = min(cfg.order, 3)
    residual, first = 0, None
    with stopwatch() as sw:
        for r, s in itertools.product(range(top + 1), repeat=2):
            c = len(defining_relation_residual(cfg.n, i, j, k, l, r, s))
            if c and first is None:
                first = f"r={r}, s={s}"
            residual += c
        ser = series_relation_residual(cfg.n, i, j, k, l, cfg.order)
        c, msg = residual_summary(ser)
        if c and first is None:
            first = f"series form: {msg}"
        residual += c
    return IdentityReport("defining_relations", dict(i=i, j=j, k=k, l=l, n=cfg.n, N=cfg.order, levels=top),
                          ser.win, residual, sw["ms"], first)


def _run_confluence(cfg, word_seed):
    rng = random.Random(f"confluence:{cfg.n}:{cfg.seed}:{word_seed}")
    gens = [(r, i, j) for r in (1, 2) for i in range(1, cfg.n + 1) for j in range(1, cfg.n + 1)]
    word = tuple(rng.choice(gens) for _ in range(rng.randint(2, 4)))
    with stopwatch() as sw:
        x = Element.from_words(cfg.n, {word: 1})
        a = normal_form(x)
        b, steps = normal_form_randomized(x, rng)
        residual = len(a - b)
    return IdentityReport("confluence", dict(word=word, n=cfg.n), "exact", residual, sw["ms"],
                          None if not residual else f"word {word}", {"steps": steps})


def _run_minor(name):
    def run(cfg, **params):
        return mc.verify_minor_identity(name, params, cfg.n, cfg.order)
    return run


def _run_skew(name):
    def run(cfg, eval_k, **params):
        residual, first, resamples = 0, None, 0
        with stopwatch() as sw:
            for s in range(cfg.points):
                point = sk.sample_point(cfg.n, eval_k, f"{cfg.seed}:{s}")
                rep = sk.check_skewfield_identity(name, params, point)
                resamples += rep.notes.get("resamples", 0)
                if rep.residual_terms and first is None:
                    first = f"point seed {point.seed}: {rep.counterexample}"
                residual += rep.residual_terms
        notes = {"points": cfg.points, "epistemic": sk.EPISTEMIC}
        if resamples:
            notes["resamples"] = resamples
        return IdentityReport(name, dict(params, n=cfg.n, eval_k=eval_k), "exact", residual, sw["ms"], first, notes)
    return run


def _run_oracle(name):
    def run(cfg, **params):
        return sk.commutative_oracle(name, params, cfg.n, cfg.seed)
    return run


def _flag_order(cfg):
    return min(cfg.order, FLAG_ORDER)


def _run_bialgebra(cfg, kind):
    return fa.bialgebra_check(kind, cfg.n, _flag_order(cfg))


def _run_minor_coproduct(cfg, I, J):
    return fa.bialgebra_check("minor_coproduct", cfg.n, _flag_order(cfg), dict(I=I, J=J))


def _run_coaction(cfg, kind, **params):
    return fa.coaction_check(kind, cfg.n, _flag_order(cfg), params)


def _run_comodule(kind):
    def run(cfg, **params):
        return fa.comodule_map_check(kind, cfg.n, _flag_order(cfg), params)
    return run


def _run_flag_model(cfg, family, **params):
    return fa.minor_model_check(family, params, cfg.composition, cfg.n, cfg.order)


def _run_c_ideal(cfg, N):
    return fa.c_ideal_stability_check(cfg.n, N)


def _run_action(cfg, kind, **params):
    return fa.action_check(kind, cfg.n, _flag_order(cfg), params)


def _run_qp_factorization(cfg):
    return crosscheck.plucker_factorization_check(cfg.n, cfg.order)


def _run_principal(cfg):
    return crosscheck.principal_pivot_check(cfg.n, cfg.order)


def _run_parabolic(cfg, gamma):
    return crosscheck.parabolic_check(cfg.n, gamma, cfg.order)


def _single(cfg):
    return [{}]


REGISTRY: dict = {
    "defining_relations": (_plan_defining, _run_defining),
    "confluence": (_plan_confluence, _run_confluence),
    **{name: (_plan_minor(name), _run_minor(name)) for name in mc.FAMILIES},
    "qp_factorization": (_single, _run_qp_factorization),
    "principal_pivots": (_single, _run_principal),
    "parabolic": (lambda cfg: [dict(gamma=g) for g in _compositions(cfg.n)], _run_parabolic),
    **{name: (_plan_skew(name), _run_skew(name)) for name in sk.SKEW_FAMILIES},
    **{f"oracle_{name}": (_plan_oracle(name), _run_oracle(name)) for name in sk.ORACLE_FAMILIES},
    "bialgebra": (_plan_flag_bialgebra, _run_bialgebra),
    "minor_coproduct": (_plan_minor_coproduct, _run_minor_coproduct),
    "coaction": (_plan_coaction, _run_coaction),
    "sigma_square": (_plan_sigma, _run_comodule("sigma_square")),
    "mu_square": (_plan_mu, _run_comodule("mu_square")),
    "young_composition": (_plan_young, _run_comodule("young_composition")),
    "flag_model": (_plan_flag_model, _run_flag_model),
    "c_ideal": (_plan_c_ideal, _run_c_ideal),
    "action": (_plan_action, _run_action),
}

FAMILY_GROUPS = {
    "yangian": ("defining_relations", "confluence"),
    "minors": tuple(mc.FAMILIES),
    "factorization": ("qp_factorization", "principal_pivots", "parabolic"),
    "skew": tuple(sk.SKEW_FAMILIES),
    "oracle": tuple(f"oracle_{x}" for x in sk.ORACLE_FAMILIES),
    "flag": ("bialgebra", "minor_coproduct", "coaction", "sigma_square", "mu_square", "young_composition",
             "flag_model", "c_ideal", "action"),
}


def all_families():
    return list(REGISTRY)


# -- running ------------------------------------------------------------------------

def _sort_key(params):
    return json.dumps(params, sort_keys=True, default=str)


def plan(cfg: SuiteConfig):
    """Ordered list of (family, params) tasks."""
    tasks = []
    for fam in cfg.selected():
        planner, _ = REGISTRY[fam]
        try:
            items = planner(cfg)
        except ResourceGuard as exc:
            tasks.append((fam, {"skipped": str(exc)}))
            continue
        tasks += [(fam, p) for p in sorted(items, key=_sort_key)]
    return tasks


def _window_hi(win):
    if not isinstance(win, tuple):
        return INF
    if len(win) == 2:
        return win[1]
    return min(win[1], win[3])


def run_task(task) -> IdentityReport:
    """Run one (family, params, config) task; guard violations become skipped lines."""
    fam, params, cfg_dict = task
    cfg = SuiteConfig(**cfg_dict)
    if "skipped" in params:
        return IdentityReport(fam, {}, None, 0, status="skipped", notes={"reason": params["skipped"]})
    _, runner = REGISTRY[fam]
    try:
        rep = runner(cfg, **params)
    except ResourceGuard as exc:
        return IdentityReport(fam, dict(params), None, 0, status="skipped", notes={"reason": str(exc)})
    except Exception as exc:  # a crashing check is a failing check
        return IdentityReport(fam, dict(params), None, 0, status="fail",
                              counterexample=f"{type(exc).__name__}: {exc}")
    if rep.family != fam:
        rep.params = dict(rep.params, check=rep.family)
        rep.family = fam
    want = cfg.order
    if cfg.strict_windows and rep.status == "pass" and _window_hi(rep.window) < want:
        rep.status = "fail"
        rep.counterexample = f"verified window {rep.window} is narrower than the requested order {want}"
    return rep


def report_line(rep: IdentityReport, seed, timings=False) -> str:
    d = rep.to_dict(timings)
    d["seed"] = seed
    return json.dumps(d, sort_keys=True)


def run_suite(cfg: SuiteConfig, on_report=None):
    """Run every planned task; yields reports in (family, params) order regardless of --jobs."""
    cfg_dict = asdict(cfg)
    tasks = [(fam, params, cfg_dict) for fam, params in plan(cfg)]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            reports = list(pool.map(run_task, tasks, chunksize=max(1, len(tasks) // (8 * cfg.jobs))))
    else:
        reports = [run_task(t) for t in tasks]
    order = {f: i for i, f in enumerate(cfg.selected())}
    keyed = sorted(zip(tasks, reports), key=lambda tr: (order[tr[0][0]], _sort_key(tr[0][1])))
    for _, rep in keyed:
        if on_report:
            on_report(rep)
        yield rep


@dataclass
class _Row:
    checks: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    residual: int = 0
    ms: float = 0.0


def summary_table(reports, timings=False) -> str:
    rows: dict = {}
    for rep in reports:
        row = rows.setdefault(rep.family, _Row())
        row.checks += 1
        row.residual += rep.residual_terms
        row.ms += rep.elapsed_ms
        if rep.status == "pass":
            row.passed += 1
        elif rep.status == "skipped":
            row.skipped += 1
        else:
            row.failed += 1
    head = ["family", "checks", "pass", "fail", "skipped", "residual"] + (["seconds"] if timings else [])
    body = []
    for fam, r in rows.items():
        cells = [fam, r.checks, r.passed, r.failed, r.skipped, r.residual]
        if timings:
            cells.append(f"{r.ms / 1000:.1f}")
        body.append([str(c) for c in cells])
    total = [sum(getattr(r, a) for r in rows.values()) for a in ("checks", "passed", "failed", "skipped", "residual")]
    body.append(["TOTAL"] + [str(x) for x in total] + ([f"{sum(r.ms for r in rows.values()) / 1000:.1f}"] if timings else []))
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    fmt = lambda cells: "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(cells, widths)))  # noqa: E731
    lines = [fmt(head), fmt(["-" * w for w in widths])] + [fmt(b) for b in body[:-1]]
    lines += [fmt(["-" * w for w in widths]), fmt(body[-1])]
    return "\n".join(lines)
