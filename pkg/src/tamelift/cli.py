"""Command line front end.

Every subcommand reads an optional config (JSON, or any YAML superset of it),
runs the corresponding computation and writes a JSON report:

    {"command", "config_echo", "results", "checks", "budget"}

Exit status is 0 when no check failed, 1 on a failed check or a computation
error (recorded under results.error) and 2 on a malformed config.
"""

from __future__ import annotations

import json
import random
import sys
import time
from pathlib import Path
from typing import Any, Callable

import click
import yaml

from .cohomology import brute_force_h1, h1_space
from .lifting_engine import (
    ConfigError,
    check_sobre,
    dimension_ledger,
    family_parameter,
    problem_from_config,
    run,
)
from .local_conditions import (
    build_condition,
    lift_member,
    membership_test,
    nearly_ordinary_ledger,
    preservation_check,
    PreservationFailed,
)
from .matrix_algebra import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    commutator_closure,
    congruence_cardinality,
    congruence_generators,
    principal_congruence_enum,
    unipotent_lower,
    unipotent_upper,
    torus,
)
from .padic_ring import Ring, RingParams, hensel_sqrt, invert_unit
from .tame_rep import TameRep, case_tag, classify_integral, classify_residual, is_bad, validate

SCHEMA_EXIT = 2
FAIL_EXIT = 1


class Report:
    def __init__(self, command: str, config: dict, budget: int):
        self.command = command
        self.config = config
        self.budget = budget
        self.results: dict[str, Any] = {}
        self.checks: list[dict] = []
        self.timing: dict[str, float] = {}

    def check(self, name: str, ok: bool | None, details: Any = None) -> bool:
        status = "skip" if ok is None else ("pass" if ok else "fail")
        rec: dict[str, Any] = {"name": name, "status": status}
        if details is not None:
            rec["details"] = details
        self.checks.append(rec)
        return bool(ok)

    @property
    def failed(self) -> bool:
        return any(c["status"] == "fail" for c in self.checks) or "error" in self.results

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "command": self.command,
            "config_echo": self.config,
            "results": self.results,
            "checks": self.checks,
            "budget": self.budget,
        }
        if timing:
            out["timing"] = self.timing
        return out


# ----------------------------------------------------------------------------
# config helpers


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = yaml.safe_load(Path(path).read_text())
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping")
    return data


def _require(cfg: dict, allowed: set[str], required: set[str] = frozenset()) -> None:
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    missing = set(required) - set(cfg)
    if missing:
        raise ConfigError(f"missing keys: {sorted(missing)}")


def _ring(cfg: dict) -> RingParams:
    block = cfg.get("ring")
    if not isinstance(block, dict):
        raise ConfigError("missing ring block")
    allowed = {"p", "e", "f", "residue_poly", "eisenstein_tail", "precision"}
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"unknown ring keys: {sorted(unknown)}")
    try:
        return RingParams.from_config(block)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad ring block: {exc}") from None


def _rep(cfg: dict, params: RingParams, key: str = "rep") -> TameRep:
    data = cfg.get(key)
    if not isinstance(data, dict):
        raise ConfigError(f"missing {key} block")
    unknown = set(data) - {"q", "A", "B", "precision", "det"}
    if unknown:
        raise ConfigError(f"unknown {key} keys: {sorted(unknown)}")
    try:
        return TameRep.from_json(params, data)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise ConfigError(f"bad {key} block: {exc}") from None


# ----------------------------------------------------------------------------
# commands


def cmd_ring_check(cfg: dict, rep: Report, seed: int, **_) -> None:
    _require(cfg, {"ring", "samples"}, {"ring"})
    params = _ring(cfg)
    N = int(cfg["ring"].get("precision", 8))
    ring = Ring(params, N)
    F = params.field
    rep.results.update({"p": params.p, "e": params.e, "f": params.f, "residue_field_size": F.order, "precision": N, "ring_size": F.order ** N})
    if N > params.e:
        rep.check("v(p) == e", ring.from_int(params.p).val() == params.e)
    else:
        rep.check("v(p) == e", None, {"reason": "precision too low to see v(p)"})
    rng = random.Random(seed)
    samples = int(cfg.get("samples", 50))

    def rand():
        return ring.from_digits([rng.randrange(F.order) for _ in range(N)])

    assoc = distrib = inverse = sqrt_ok = True
    for _ in range(samples):
        a, b, c = rand(), rand(), rand()
        assoc &= (a * b) * c == a * (b * c)
        distrib &= a * (b + c) == a * b + a * c
        if a.val() == 0:
            inverse &= (a * invert_unit(a)) == ring.one
            s = a * a
            if params.p != 2:
                r = hensel_sqrt(s)
                sqrt_ok &= r * r == s
    rep.check("associativity", assoc, {"samples": samples})
    rep.check("distributivity", distrib)
    rep.check("unit inverses", inverse)
    rep.check("hensel square roots", sqrt_ok)


def cmd_classify(cfg: dict, rep: Report, **_) -> None:
    _require(cfg, {"ring", "rep"}, {"ring", "rep"})
    params = _ring(cfg)
    r = _rep(cfg, params)
    validate(r)
    residual = classify_residual(r.residual())
    rep.results["residual"] = residual.to_json()
    if r.precision > 1:
        integral = classify_integral(r)
        rep.results["integral"] = integral.to_json()
        rep.results["type"] = integral.family
        rep.results["case_tag"] = case_tag(residual, integral)
        rep.results["bad"] = is_bad(r).to_json()
        rep.check("reduction compatible", integral.compatible)
    else:
        rep.results["type"] = residual.family


def cmd_cohomology(cfg: dict, rep: Report, budget: int, **_) -> None:
    _require(cfg, {"ring", "rep"}, {"ring", "rep"})
    params = _ring(cfg)
    rbar = _rep(cfg, params).residual()
    validate(rbar)
    sp = h1_space(rbar)
    rep.results.update({"d0": sp.h0_dim, "d1": sp.h1_dim, "d2": sp.h2_dim, "space": sp.to_json()})
    rep.check("euler characteristic", sp.h0_dim - sp.h1_dim + sp.h2_dim == 0)
    try:
        bf = brute_force_h1(rbar, budget)
        rep.check("brute force h1 agrees", bf.h1_dim == sp.h1_dim, {"brute_force_h1": bf.h1_dim})
    except BudgetExceeded as exc:
        rep.check("brute force h1 agrees", None, {"reason": str(exc)})


def cmd_condition(cfg: dict, rep: Report, seed: int, **_) -> None:
    _require(cfg, {"ring", "rep", "members"}, {"ring", "rep"})
    params = _ring(cfg)
    r = _rep(cfg, params)
    cond = build_condition(r)
    rep.results["condition"] = cond.to_json()
    if cond.delegated:
        rep.check("condition constructed", None, {"delegated": cond.case_tag})
        return
    rep.check("dim N_q == h2", len(cond.nq_basis) == cond.space.h2_dim, {"dim_N": len(cond.nq_basis), "h2": cond.space.h2_dim})
    rng = random.Random(seed)
    count = int(cfg.get("members", 3))
    top = min(cond.alpha + 2, cond.template.max_precision)
    failures, tried = [], 0
    for m in range(cond.alpha, top + 1):
        for _ in range(count):
            mem = cond.template.random_member(m, rng)
            for u in cond.nq_basis:
                tried += 1
                try:
                    preservation_check(cond, u, mem)
                except PreservationFailed:
                    failures.append({"m": m, "u": u.to_json()})
    rep.check("N_q basis preserves members", not failures, {"checks": tried, "precisions": [cond.alpha, top], "failures": failures})


def cmd_lift_local(cfg: dict, rep: Report, **_) -> None:
    _require(cfg, {"ring", "rep", "start", "target"}, {"ring", "rep"})
    params = _ring(cfg)
    r = _rep(cfg, params)
    cond = build_condition(r)
    if cond.delegated:
        rep.results["error"] = {"type": "Delegated", "message": cond.case_tag}
        return
    start = int(cfg.get("start", cond.alpha))
    target = int(cfg.get("target", start + 4))
    cur = cond.to_frame(r).reduce(start)
    rep.check(f"member at {start}", membership_test(cond, cur) is not None)
    for M in range(start + 1, target + 1):
        nxt = lift_member(cond, cur, M)
        rep.check(f"member at {M}", membership_test(cond, nxt) is not None and nxt.reduce(M - 1).same_as(cur))
        cur = nxt
    rep.results.update({"case_tag": cond.case_tag, "alpha": cond.alpha, "lift": cur.to_json()})


def cmd_simulate_global(cfg: dict, rep: Report, **_) -> None:
    _require(cfg, {"ring", "problem", "family"}, {"problem"})
    params = _ring(cfg) if "ring" in cfg else None
    problem = problem_from_config(params, cfg["problem"])
    for c in problem.validate():
        rep.check(c["name"], c["status"] == "pass", c.get("details"))
    led = dimension_ledger(problem)
    rep.results["ledger"] = led
    rep.check("dim == r + s + 2", led["dim"] == led["required_dim"])
    sob = check_sobre(problem)
    rep.check("kernel == <f>", sob["kernel_is_f"], {"kernel_basis": sob["kernel_basis"]})
    rep.check("onto (+) H^1/N_v", sob["surjective"], {"missed": sob["missed"]})
    state = run(problem, cfg.get("family"))
    ok = all(state.local_reps[e.name].reduce(problem.n).same_as(e.rep) for e in problem.primes)
    rep.check(f"lift reduces to rho_n mod pi^{problem.n}", ok)
    rep.results["final_precision"] = state.m
    rep.results["family_parameter"] = family_parameter(state)
    rep.results["trace"] = state.to_json()


def cmd_verify_commutator_lemma(cfg: dict, rep: Report, budget: int, seed: int, p=None, e=None, f=None, n=None, samples=None, **_) -> None:
    _require(cfg, {"ring", "n", "samples"})
    block = dict(cfg.get("ring", {}))
    for key, val in (("p", p), ("e", e), ("f", f)):
        if val is not None:
            block[key] = val
    block.setdefault("p", 7)
    block.setdefault("e", 2)
    params = _ring({"ring": block})
    n = int(n if n is not None else cfg.get("n", 3))
    samples = int(samples if samples is not None else cfg.get("samples", 100))
    rep.results.update({"p": params.p, "e": params.e, "f": params.f, "n": n})
    size = congruence_cardinality(params, n, 1)
    if size > budget:
        rep.check("commutator_closure == principal_congruence(2)", None, {"reason": f"|H| = {size} exceeds budget {budget}"})
    else:
        closure = commutator_closure(congruence_generators(params, n, 1), n, budget)
        target = principal_congruence_enum(params, n, 2, budget)
        rep.results.update({"H_size": size, "closure_size": len(closure), "H2_size": len(target)})
        rep.check("commutator_closure == principal_congruence(2)", closure.same_elements(target))
    # the two displayed identities, digit for digit
    P = max(n, 6)
    ring = Ring(params, P)
    pi = ring.pi
    t = torus(1 + pi)
    rng = random.Random(seed)
    F = params.field
    up = low = True
    for _ in range(samples):
        a = ring.from_digits([rng.randrange(F.order) for _ in range(P)])
        b = ring.from_digits([rng.randrange(F.order) for _ in range(P)])
        up &= unipotent_upper(pi * a).commutator(t) == unipotent_upper(-(pi * pi) * a * (pi + 2))
        low &= unipotent_lower(pi * b).commutator(t) == unipotent_lower(b * pi * pi * (pi + 2) * invert_unit((pi + 1) * (pi + 1)))
    rep.check("upper unipotent commutator identity", up, {"samples": samples, "precision": P})
    rep.check("lower unipotent commutator identity", low, {"samples": samples, "precision": P})


def cmd_ledger(cfg: dict, rep: Report, **_) -> None:
    _require(cfg, {"ring", "gens"}, {"gens"})
    params = _ring(cfg) if "ring" in cfg else RingParams(7, e=1)
    try:
        gens = [(tuple(int(x) for x in g[0]), int(g[1])) for g in cfg["gens"]]
    except (TypeError, IndexError, ValueError) as exc:
        raise ConfigError(f"gens must be [[a, b, c, d], chi] pairs: {exc}") from None
    led = nearly_ordinary_ledger(gens, params.field)
    rep.results["ledger"] = led.to_json()
    expected = led.h2_Ad + (0 if led.non_smooth_flag else 1)
    rep.check("codim N_p == h2 + 1 (h2 when non-smooth)", led.codim_Np == expected, {"codim": led.codim_Np, "h2": led.h2_Ad})


HELP = {
    "ring-check": "Sanity checks of O/pi^N arithmetic on random samples.",
    "classify": "Residual and integral type of a tame representation.",
    "cohomology": "Local H^0, H^1, H^2 of Ad0 of the residual representation.",
    "condition": "Build (C_q, N_q) and check preservation on sample members.",
    "lift-local": "Lift a member-reduction step by step inside C_q.",
    "simulate-global": "Run the global lifting engine on a synthetic problem.",
    "ledger": "Nearly ordinary dimension bookkeeping at p.",
}

COMMANDS: dict[str, Callable] = {
    "ring-check": cmd_ring_check,
    "classify": cmd_classify,
    "cohomology": cmd_cohomology,
    "condition": cmd_condition,
    "lift-local": cmd_lift_local,
    "simulate-global": cmd_simulate_global,
    "verify-commutator-lemma": cmd_verify_commutator_lemma,
    "ledger": cmd_ledger,
}


def dispatch(command: str, config_path: str | None, out: str | None, budget: int, seed: int, timing: bool = False, **extra) -> int:
    try:
        cfg = load_config(config_path)
    except ConfigError as exc:
        _emit({"command": command, "error": {"type": "ConfigError", "message": str(exc)}}, out)
        return SCHEMA_EXIT
    report = Report(command, cfg, budget)
    t0 = time.perf_counter()
    try:
        COMMANDS[command](cfg, report, budget=budget, seed=seed, **extra)
    except ConfigError as exc:
        report.results["error"] = {"type": "ConfigError", "message": str(exc)}
        _emit(report.to_json(timing), out)
        return SCHEMA_EXIT
    except Exception as exc:  # every computation error becomes a structured report
        report.results["error"] = {"type": type(exc).__name__, "message": str(exc)}
    report.timing["seconds"] = round(time.perf_counter() - t0, 3)
    _emit(report.to_json(timing), out)
    return FAIL_EXIT if report.failed else 0


def _emit(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2, sort_keys=True, default=str) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


_common = [
    click.option("--config", "config_path", type=click.Path(), default=None, help="JSON or YAML config file."),
    click.option("--out", type=click.Path(), default=None, help="Write the report here instead of stdout."),
    click.option("--budget", type=float, default=float(DEFAULT_BUDGET), show_default=True, help="Enumeration budget (elements)."),
    click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized sampling."),
    click.option("--timing", is_flag=True, help="Include wall-clock timing (makes reports non-reproducible)."),
]


def _with_common(fn):
    for opt in reversed(_common):
        fn = opt(fn)
    return fn


@click.group()
def main() -> None:
    """Deformation lifting through tame local conditions."""


def _make(name: str):
    @main.command(name, help=HELP[name])
    @_with_common
    def _cmd(config_path, out, budget, seed, timing):
        sys.exit(dispatch(name, config_path, out, int(budget), seed, timing))

    return _cmd


for _name in COMMANDS:
    if _name != "verify-commutator-lemma":
        _make(_name)


@main.command("verify-commutator-lemma")
@_with_common
@click.option("--p", "p", type=int, default=None)
@click.option("--e", "e", type=int, default=None)
@click.option("--f", "f", type=int, default=None)
@click.option("--n", "n", type=int, default=None)
@click.option("--samples", type=int, default=None, help="Random (a, b) pairs for the identities.")
def _verify(config_path, out, budget, seed, timing, p, e, f, n, samples):
    """Commutators of the pi-congruence subgroup against the pi^2-congruence subgroup."""
    sys.exit(dispatch("verify-commutator-lemma", config_path, out, int(budget), seed, timing, p=p, e=e, f=f, n=n, samples=samples))


if __name__ == "__main__":  # pragma: no cover
    main()
