"""Command-line front end.

Exit codes: 0 success, 1 a verified claim does not hold, 2 input error,
3 constraint error (quotas or inconsistent start opinions), 4 budget
exceeded or inconclusive run.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from fractions import Fraction

from . import claims, combinatorics as comb
from .aggregation import MAJ, BudgetExceeded, QuotaError, QuotaSpec, check_opinion, quota_rule
from .bdp import DelegationStructure, Inconclusive, InconsistentStart, run, transform_then_aggregate
from .default import decompose, pv_maj_default, translate_t_prime
from .io import SchemaError, dumps, load_json, opinion_to_json, parse_profile, parse_trustees
from .logic import Constraint, EnumerationLimitError, FormulaSyntaxError, classify_agenda
from .proxy import PV_MAJ, graphs, individually_rational, pv_quota, translate_t

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CONSTRAINT, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(ValueError):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not an exact fraction: {text!r}") from None


# -- agenda ----------------------------------------------------------------

def cmd_agenda_check(args) -> int:
    issues = args.issues.split(",") if args.issues else None
    gamma = Constraint.parse(args.gamma, labels=issues)
    _emit(dumps(classify_agenda(gamma)), args.out)
    return EXIT_OK


# -- aggregate ---------------------------------------------------------------

def _quota_spec(args, m: int) -> QuotaSpec:
    if args.q1 is None or args.q0 is None:
        raise UsageError("quota rules need --q1 and --q0")
    return QuotaSpec.uniform(_fraction(args.q1), _fraction(args.q0), m)


def _graph_table(prof, issues):
    table = {}
    for p, g in zip(issues, graphs(prof)):
        table[p] = {"gurus": list(g.gurus), "weights": list(g.weights), "void": g.void,
                    "cycles": [list(c) for c in g.cycles]}
    return table


def cmd_aggregate(args) -> int:
    loaded = parse_profile(load_json(args.input), gamma_text=args.gamma)
    issues, prof, gamma = loaded.issues, loaded.opinions, loaded.gamma
    rule = args.rule
    expected = {"maj": "incomplete", "quota": "incomplete", "bdp-maj": "incomplete",
                "pv-maj": "proxy", "pv-quota": "proxy", "pv-default": "default"}[rule]
    if loaded.kind != expected:
        raise SchemaError("opinions", f"rule {rule} needs a {expected} profile, got {loaded.kind}")
    report = {"rule": rule, "n": loaded.n, "issues": issues, "gamma": gamma.text()}
    if rule in ("maj", "quota"):
        agg = MAJ if rule == "maj" else quota_rule(_quota_spec(args, len(issues)))
        outcome = agg(prof)
        report["rationality"] = [dict(agent=i, **check_opinion(o, gamma)) for i, o in enumerate(prof)]
    elif rule in ("pv-maj", "pv-quota"):
        agg = PV_MAJ if rule == "pv-maj" else pv_quota(_quota_spec(args, len(issues)))
        outcome = agg(prof)
        gs = graphs(prof)
        report["graphs"] = _graph_table(prof, issues)
        report["void_issues"] = [p for p, g in zip(issues, gs) if g.void]
        report["irrational_agents"] = [i for i in range(loaded.n)
                                       if not individually_rational(prof, i, gamma, gs)]
        report["translated"] = [opinion_to_json(o) for o in translate_t(prof)]
    elif rule == "pv-default":
        outcome = pv_maj_default(prof)
        cyc = {}
        for p, name in enumerate(issues):
            d = decompose(prof, p)
            cyc[name] = [{"members": list(c), "accept": a, "reject": r, "weight": w}
                         for c, a, r, w in zip(d.cycles, d.accept, d.reject, d.weight)]
        report["cycles"] = cyc
        report["translated"] = [opinion_to_json(o) for o in translate_t_prime(prof)]
    else:
        if not args.graph:
            raise UsageError("bdp-maj needs --graph")
        g_issues, maps = parse_trustees(load_json(args.graph))
        if g_issues != issues:
            raise SchemaError("graph.issues", "issue labels differ from the profile")
        if any(v is None for o in prof for v in o):
            raise SchemaError("opinions", "BDP opinions must be total (no '*')")
        outcome = transform_then_aggregate(prof, DelegationStructure(maps), gamma,
                                           max_steps=args.max_steps)
    report["outcome"] = dict(zip(issues, opinion_to_json(outcome)))
    if args.format == "csv":
        rows = [{"issue": p, "outcome": v} for p, v in report["outcome"].items()]
        _emit(_csv(rows, ["issue", "outcome"]), args.out)
    else:
        _emit(dumps(report), args.out)
    return EXIT_OK


# -- proxy validate ------------------------------------------------------------

def cmd_proxy_validate(args) -> int:
    loaded = parse_profile(load_json(args.input), gamma_text=args.gamma, kind="proxy")
    gs = graphs(loaded.opinions)
    report = {
        "n": loaded.n, "issues": loaded.issues, "gamma": loaded.gamma.text(),
        "void_issues": [p for p, g in zip(loaded.issues, gs) if g.void],
        "irrational_agents": [i for i in range(loaded.n)
                              if not individually_rational(loaded.opinions, i, loaded.gamma, gs)],
        "graphs": _graph_table(loaded.opinions, loaded.issues),
    }
    _emit(dumps(report), args.out)
    return EXIT_OK


# -- bdp run ---------------------------------------------------------------------

def cmd_bdp_run(args) -> int:
    issues, maps = parse_trustees(load_json(args.graph))
    loaded = parse_profile(load_json(args.opinions), gamma_text=args.gamma, kind="incomplete")
    if loaded.issues != issues:
        raise SchemaError("opinions.issues", "issue labels differ from the graph")
    if any(v is None for o in loaded.opinions for v in o):
        raise SchemaError("opinions", "BDP opinions must be total (no '*')")
    G = DelegationStructure(maps)
    out = run(loaded.opinions, G, loaded.gamma, max_steps=args.max_steps)
    report = {"issues": issues, "gamma": loaded.gamma.text(), "diameter_bound": G.diameter_bound(),
              **out.as_dict(include_orbit=args.trace)}
    _emit(dumps(report), args.out)
    return EXIT_BUDGET if out.inconclusive else EXIT_OK


# -- analyze -----------------------------------------------------------------------

ANALYZE_COLUMNS = ["n", "exact", "estimate", "stderr", "samples", "seed"]


def _need_seed(args):
    if args.samples and args.seed is None:
        raise UsageError("--seed is required when sampling")


def cmd_analyze(args) -> int:
    rows = []
    if args.what == "counts":
        for n in range(1, args.n_max + 1):
            rows.append({"n": n, "sum_f_k_factorial": comb.total_graphs(n), "n_pow_n": n ** n,
                         "identity": comb.check_identity_total(n),
                         "closed_form_hung_count": comb.closed_form_hung_count(n),
                         "all_hung_count": comb.all_hung_count(n),
                         "guru_free_prob": comb.prob_guru_free(n).value,
                         "all_hung_prob": comb.prob_all_abstain_default(n).value})
        _emit(_csv(rows, list(rows[0])), args.out)
        return EXIT_OK
    _need_seed(args)
    for n in args.n:
        if args.what == "prop4":
            exact = comb.prob_guru_free(n).value
            est = comb.mc_guru_free(n, comb.McConfig(args.samples, args.seed, args.workers)) if args.samples else None
        else:
            exact = comb.prob_all_abstain_default(n).value
            est = comb.mc_all_abstain_default(n, comb.McConfig(args.samples, args.seed, args.workers)) if args.samples else None
        rows.append({"n": n, "exact": repr(exact),
                     "estimate": repr(est.estimate) if est else "",
                     "stderr": repr(est.stderr) if est else "",
                     "samples": args.samples, "seed": "" if args.seed is None else args.seed})
    _emit(_csv(rows, ANALYZE_COLUMNS), args.out)
    return EXIT_OK


# -- verify ---------------------------------------------------------------------------

def _run_claim(args) -> dict:
    c = args.claim
    n, m = args.n, args.m
    if c == "prop1":
        gamma = Constraint.parse(args.gamma or "T", m=None if args.gamma else (m or 1))
        return claims.claim_prop1(gamma, n or 3, args.budget)
    if c == "lemma1":
        grid = [_fraction(x) for x in args.grid.split(",")] if args.grid else None
        return claims.claim_lemma1(n or 3, m or 1, grid=grid, budget=args.budget)
    if c == "thm4":
        return claims.claim_thm4(n or 3, m or 1, args.budget)
    if c == "identity-total":
        return claims.claim_identity_total(n or 12)
    if c in ("omov", "omov-viscous"):
        return claims.claim_omov(n or 3, m or 1, viscous=c == "omov-viscous", budget=args.budget)
    if c == "roundtrip":
        return claims.claim_roundtrip(n or 4, m or 2, args.budget)
    if c == "default-coherence":
        return claims.claim_default_coherence(n or 4, m or 1, args.budget)
    if c == "prop4-exact":
        return claims.claim_prop4_exact(range(2, (n or 6) + 1))
    if c == "prop4-limit":
        if args.seed is None:
            raise UsageError("--seed is required when sampling")
        return claims.claim_prop4_limit(samples=args.samples or 10 ** 5, seed=args.seed,
                                        workers=args.workers)
    if c == "prop5-exact":
        return claims.claim_prop5_exact(range(1, (n or 6) + 1))
    if c == "prop5-sequence":
        return claims.claim_prop5_sequence(n or 40)
    if c == "def3":
        return claims.claim_def3(n or 3, m or 2, args.budget)
    raise UsageError(f"unknown claim {c!r}")


def cmd_verify(args) -> int:
    try:
        report = _run_claim(args)
    except BudgetExceeded as exc:
        _emit(dumps({"claim": args.claim, "status": "INCONCLUSIVE", "reason": str(exc)}), args.out)
        return EXIT_BUDGET
    report["status"] = "PASS" if report["holds"] else "FAIL"
    _emit(dumps(report), args.out)
    return EXIT_OK if report["holds"] else EXIT_FAIL


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="liquidproxy", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version="liquidproxy 0.1.0")
    sub = ap.add_subparsers(dest="command", required=True)

    agenda = sub.add_parser("agenda", help="agenda classification").add_subparsers(dest="action", required=True)
    a = agenda.add_parser("check", help="simple / evenly negatable / path-connected")
    a.add_argument("--gamma", required=True)
    a.add_argument("--issues", help="comma-separated issue labels (default: atoms of gamma)")
    a.add_argument("--out")
    a.set_defaults(func=cmd_agenda_check)

    a = sub.add_parser("aggregate", help="aggregate a profile file")
    a.add_argument("input")
    a.add_argument("--rule", choices=["maj", "quota", "pv-maj", "pv-quota", "pv-default", "bdp-maj"],
                   default="maj")
    a.add_argument("--q1")
    a.add_argument("--q0")
    a.add_argument("--gamma", help="override the constraint in the input file")
    a.add_argument("--graph", help="trustee JSON for bdp-maj")
    a.add_argument("--max-steps", type=int, default=10_000)
    a.add_argument("--format", choices=["json", "csv"], default="json")
    a.add_argument("--out")
    a.set_defaults(func=cmd_aggregate)

    proxy = sub.add_parser("proxy", help="proxy profile tools").add_subparsers(dest="action", required=True)
    a = proxy.add_parser("validate", help="report void issues and irrational agents")
    a.add_argument("input")
    a.add_argument("--gamma")
    a.add_argument("--out")
    a.set_defaults(func=cmd_proxy_validate)

    bdp = sub.add_parser("bdp", help="Boolean DeGroot processes").add_subparsers(dest="action", required=True)
    a = bdp.add_parser("run")
    a.add_argument("--graph", required=True)
    a.add_argument("--opinions", required=True)
    a.add_argument("--gamma")
    a.add_argument("--max-steps", type=int, default=10_000)
    a.add_argument("--trace", action="store_true", help="include every profile of the orbit")
    a.add_argument("--out")
    a.set_defaults(func=cmd_bdp_run)

    an = sub.add_parser("analyze", help="exact and sampled probabilities")
    an_sub = an.add_subparsers(dest="what", required=True)
    for what in ("prop4", "prop5"):
        a = an_sub.add_parser(what)
        a.add_argument("--n", type=int, nargs="+", required=True)
        a.add_argument("--samples", type=int, default=0)
        a.add_argument("--seed", type=int)
        a.add_argument("--workers", type=int, default=1)
        a.add_argument("--out")
        a.set_defaults(func=cmd_analyze)
    a = an_sub.add_parser("counts")
    a.add_argument("--n-max", type=int, default=12)
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    a = sub.add_parser("verify", help="check one named claim")
    a.add_argument("--claim", required=True, choices=claims.CLAIMS)
    a.add_argument("--gamma")
    a.add_argument("--n", type=int)
    a.add_argument("--m", type=int)
    a.add_argument("--grid", help="comma-separated quotas for lemma1")
    a.add_argument("--samples", type=int)
    a.add_argument("--seed", type=int)
    a.add_argument("--workers", type=int, default=1)
    a.add_argument("--budget", type=int)
    a.add_argument("--out")
    a.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QuotaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except InconsistentStart as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (SchemaError, FormulaSyntaxError, UsageError, EnumerationLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (BudgetExceeded, Inconclusive) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
