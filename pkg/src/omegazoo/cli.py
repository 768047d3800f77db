"""Command-line interface: zoo access, checks, complementation, rewirings, separators, reproduction.

Exit codes: 0 all verdicts as expected, 1 a verdict diverged, 2 usage or IO error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .automaton import Automaton, AutomatonError, Lasso

EXIT_OK, EXIT_DIVERGED, EXIT_USAGE = 0, 1, 2
BUDGET_ENV = "OMEGAZOO_SAT_BUDGET"

# verdicts the zoo entries are known to have; other inputs only report
EXPECTED = {
    "hd": {"abkks": True, "fig2_nonhd": False, "areplace": True, "astrong": True, "aweak": True,
           "amain": True, "dstrong": True, "dweak": True},
    "simplified": {"astrong": "history-deterministic", "aweak": "history-deterministic",
                   "amain": "history-deterministic"},
    "cobuchi-minimal": {"cmain": "statewise minimal"},
}
SEPARATOR_MIN = 6  # smallest separator size of each listed instance


class UsageError(Exception):
    pass


def _out(args, obj: dict, text: str):
    print(json.dumps(obj, indent=2, sort_keys=True, default=str) if args.json else text)


def load_input(source: str):
    """A zoo key or a path to a JSON/HOA file."""
    from .formats import load_automaton
    from .zoo import ENTRIES, zoo
    if source in ENTRIES:
        return zoo(source), source
    path = Path(source)
    if not path.exists():
        raise UsageError(f"{source!r} is neither a zoo key nor a file")
    return load_automaton(path), None


def _automaton(source: str) -> tuple[Automaton, str | None]:
    x, key = load_input(source)
    if not isinstance(x, Automaton):
        raise UsageError(f"{source!r} is not an ω-automaton")
    return x, key


def _simplified_for(a: Automaton, key: str | None, reference_key: str | None, facts: str | None):
    from .hd import check_simplified, load_fact_suite, zoo_hints
    from .references import reference
    from .zoo import ENTRIES
    ref_key = reference_key or (ENTRIES[key].reference if key else None)
    ref = reference(ref_key) if ref_key else None
    if facts is None and key in ("amain", "amain_drawn"):
        facts = "amain_facts"
    suite = load_fact_suite(facts) if facts else None
    return check_simplified(a, ref, suite, zoo_hints(key, a) if key else None)


def _verdict_exit(expected, observed) -> int:
    return EXIT_OK if expected is None or expected == observed else EXIT_DIVERGED


# ---------------------------------------------------------------- subcommands

def cmd_zoo(args) -> int:
    from .formats import dump
    from .zoo import ENTRIES, zoo
    if args.action == "list":
        rows = []
        for key, e in ENTRIES.items():
            x = zoo(key)
            size = x.state_count if isinstance(x, Automaton) else (x.dfa.state_count if hasattr(x, "dfa") else x.state_count)
            rows.append({"key": key, "states": size, "description": e.description})
        _out(args, {"entries": rows}, "\n".join(f"{r['key']:<12} {r['states']:>3}  {r['description']}" for r in rows))
        return EXIT_OK
    if not args.name:
        raise UsageError("zoo dump needs --name")
    x, _ = load_input(args.name)
    text = dump(x, args.format, args.name)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return EXIT_OK


def cmd_check(args) -> int:
    a, key = _automaton(args.input)
    expected = EXPECTED[args.property].get(key) if key else None
    if args.expect is not None:
        expected = {"true": True, "false": False}.get(args.expect, args.expect)
    if args.property == "hd":
        method = args.method
        if method == "auto":
            method = "two-token" if a.state_count <= args.two_token_limit else "simplified"
        if method == "two-token":
            from .games import decide_hd_two_token
            observed = decide_hd_two_token(a)
            detail = "two-token game"
        else:
            res = _simplified_for(a, key, args.reference, args.facts)
            if not res.ok and expected is False:
                raise UsageError("the simplified certificate cannot refute HD; use --method two-token")
            observed, detail = (True if res.ok else None), res.diagnosis
        obj = {"input": args.input, "property": "hd", "method": method, "hd": observed, "detail": detail}
        text = f"{args.input}: {'history-deterministic' if observed else 'not history-deterministic' if observed is False else 'undecided'} ({detail})"
    elif args.property == "simplified":
        res = _simplified_for(a, key, args.reference, args.facts)
        observed = res.verdict
        obj = {"input": args.input, "property": "simplified", "verdict": observed, "diagnosis": res.diagnosis}
        if res.ok:
            obj["good_states"] = sorted(a.state_names[q] for q in res.certificate.good)
            obj["covering"] = {a.state_names[p]: a.state_names[q] for p, q in sorted(res.certificate.covering.items())}
        text = f"{args.input}: {observed} ({res.diagnosis})"
    else:
        from .cobuchi import cobuchi_minimality_verdict
        r = cobuchi_minimality_verdict(a)
        observed = r.verdict
        obj = {"input": args.input, "property": "cobuchi-minimal", "verdict": observed,
               "failed_checks": r.failed_checks(), "distinguishing_words": len(r.safe_minimal.witnesses),
               "centralisation_witnesses": len(r.safe_centralised.witnesses)}
        text = f"{args.input}: {observed}" + (f" (failed: {', '.join(r.failed_checks())})" if r.failed_checks() else "")
    obj["expected"] = expected
    _out(args, obj, text)
    return _verdict_exit(expected, observed)


def cmd_complement(args) -> int:
    from .cobuchi import hd_complement
    from .formats import dump
    a, key = _automaton(args.input)
    res = _simplified_for(a, key, args.reference, args.facts)
    if not res.ok:
        print(f"{args.input}: no simplified certificate ({res.diagnosis})", file=sys.stderr)
        return EXIT_DIVERGED
    c = hd_complement(a, res.certificate)
    fmt = args.format or ("json" if args.out and args.out.endswith(".json") else "hoa")
    text = dump(c, fmt, c.name)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"complement of {args.input}: {c.state_count} states", file=sys.stderr)
    return EXIT_OK


def cmd_rewire(args) -> int:
    from .hd import count_rewirings, enumerate_rewirings, refute_rewiring_exact
    from .references import reference
    from .report import STRONG_FAMILIES, WEAK_FAMILIES
    from .zoo import ENTRIES
    a, key = _automaton(args.input)
    res = _simplified_for(a, key, args.reference, args.facts)
    if not res.ok:
        print(f"{args.input}: no simplified certificate ({res.diagnosis})", file=sys.stderr)
        return EXIT_DIVERGED
    names, letters = a.state_names, a.alphabet.letters

    def describe(rw):
        return [f"{names[p]} -{letters[x]}-> {names[q]}" for p, x, q in rw.choice]

    if args.action == "enumerate":
        rows = []
        for i, rw in enumerate(enumerate_rewirings(a, res.certificate, args.mode)):
            if args.limit is not None and i >= args.limit:
                break
            rows.append(describe(rw))
        total = count_rewirings(a, res.certificate) if args.mode == "all" else None
        _out(args, {"mode": args.mode, "listed": rows, "total": total},
             "\n".join("; ".join(r) for r in rows) + (f"\ntotal {total}" if total is not None else ""))
        return EXIT_OK
    ref_key = args.reference or (ENTRIES[key].reference if key else None)
    if ref_key is None:
        raise UsageError("rewire refute needs --reference for non-zoo inputs")
    ref = reference(ref_key)
    fams = []
    for text in dict.fromkeys(STRONG_FAMILIES + WEAK_FAMILIES):
        try:
            fams.append(Lasso.parse(text, a.alphabet))
        except AutomatonError:
            pass  # family uses letters outside this alphabet
    refuted, survivors, witnesses = 0, [], []
    for rw in enumerate_rewirings(a, res.certificate, args.mode):
        r = refute_rewiring_exact(rw.automaton, ref, fams)
        if r.refuted:
            refuted += 1
            if args.witnesses:
                witnesses.append({"rewiring": describe(rw), "lasso": r.witness.render(a.alphabet), "source": r.source})
        else:
            survivors.append(describe(rw))
    obj = {"mode": args.mode, "refuted": refuted, "not_refuted": survivors, "witnesses": witnesses}
    text = f"refuted {refuted}, not refuted {len(survivors)}"
    for w in witnesses:
        text += f"\n  {'; '.join(w['rewiring'])}: {w['lasso']}"
    for s in survivors:
        text += f"\n  not refuted: {'; '.join(s)}"
    _out(args, obj, text)
    return EXIT_OK if not survivors else EXIT_DIVERGED


def cmd_sep_sat(args) -> int:
    from .formats import dumps_json
    from .sat import SAT, sat_solve, to_dimacs
    from .separation import consistent_with, decode_dfa, encode_exists_kdfa, listed_instance
    budget = os.environ.get(BUDGET_ENV)
    try:
        budget_s = float(budget) if budget else None
    except ValueError:
        raise UsageError(f"{BUDGET_ENV} must be a number of seconds") from None
    t = listed_instance(args.instance)
    enc = encode_exists_kdfa(t, args.k, symmetry=not args.no_symmetry)
    if args.dimacs:
        Path(args.dimacs).write_text(to_dimacs(enc.cnf))
    res = sat_solve(enc.cnf, budget_s)
    obj = {"instance": args.instance, "k": args.k, "status": res.status, "variables": enc.cnf.num_vars,
           "clauses": len(enc.cnf.clauses), "conflicts": res.conflicts, "decisions": res.decisions}
    if res.status == SAT:
        dfa = decode_dfa(res.model, enc)
        ok, _ = consistent_with(dfa, t)
        obj["decoded_consistent"] = ok
        if args.decode:
            Path(args.decode).write_text(dumps_json(dfa, f"separator-{args.instance}-{args.k}"))
    _out(args, obj, res.status)
    expected = SAT if args.k >= SEPARATOR_MIN else "Unsat"
    return _verdict_exit(expected, res.status)


def cmd_member(args) -> int:
    from .omega import lasso_accepts
    from .references import REFERENCE_KEYS, reference
    if args.language in REFERENCE_KEYS:
        ref = reference(args.language)
        verdict = ref.member(Lasso.parse(args.lasso, ref.alphabet))
    else:
        a, _ = _automaton(args.language)
        verdict = lasso_accepts(a, Lasso.parse(args.lasso, a.alphabet))
    _out(args, {"language": args.language, "lasso": args.lasso, "member": verdict}, str(verdict).lower())
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .report import DRIVERS, build_report, dumps_report, reproduce_many
    if args.list:
        print("\n".join(f"{k:<26} {v[1]}" for k, v in DRIVERS.items()))
        return EXIT_OK
    ids = list(DRIVERS) if args.all else args.ids
    if not ids:
        raise UsageError("name lemma ids or pass --all")
    unknown = [i for i in ids if i not in DRIVERS]
    if unknown:
        raise UsageError(f"unknown lemma ids: {', '.join(unknown)}")
    jobs = args.jobs if args.jobs is not None else min(len(ids), os.cpu_count() or 1)
    entries = reproduce_many(ids, jobs, args.seed)
    report = build_report(entries, args.seed)
    for e in entries:
        print(f"{'PASS' if e.passed else 'DIVERGED':<9} {e.id:<26} observed={json.dumps(e.observed, default=str)} "
              f"expected={json.dumps(e.expected, default=str)} ({e.seconds:.1f}s)")
    if args.report:
        Path(args.report).write_text(dumps_report(report))
    return EXIT_OK if report["all_expected"] else EXIT_DIVERGED


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="omegazoo", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True)

    z = sub.add_parser("zoo", help="list or dump catalogue automata")
    z.add_argument("action", choices=["list", "dump"])
    z.add_argument("--name")
    z.add_argument("--format", choices=["hoa", "json"], default="json")
    z.add_argument("--out")
    z.set_defaults(fn=cmd_zoo)

    c = sub.add_parser("check", help="decide HD, simplified or coBüchi statewise minimality")
    c.add_argument("property", choices=["hd", "simplified", "cobuchi-minimal"])
    c.add_argument("--input", required=True, help="zoo key or JSON/HOA file")
    c.add_argument("--method", choices=["auto", "two-token", "simplified"], default="auto")
    c.add_argument("--two-token-limit", type=int, default=20, help="largest automaton for the auto two-token game")
    c.add_argument("--reference", help="reference language key for semantic determinism")
    c.add_argument("--facts", help="fact suite name or JSON path")
    c.add_argument("--expect", help="expected verdict, overrides the catalogue")
    c.set_defaults(fn=cmd_check)

    h = sub.add_parser("complement-hd", help="HD coBüchi complement of a simplified Büchi automaton")
    h.add_argument("--input", required=True)
    h.add_argument("--out")
    h.add_argument("--format", choices=["hoa", "json"])
    h.add_argument("--reference")
    h.add_argument("--facts")
    h.set_defaults(fn=cmd_complement)

    r = sub.add_parser("rewire", help="enumerate or refute deterministic rewirings")
    r.add_argument("action", choices=["enumerate", "refute"])
    r.add_argument("--input", required=True)
    r.add_argument("--mode", choices=["all", "single"], default="all")
    r.add_argument("--limit", type=int)
    r.add_argument("--witnesses", action="store_true", help="print one witness per refuted rewiring")
    r.add_argument("--reference")
    r.add_argument("--facts")
    r.set_defaults(fn=cmd_rewire)

    s = sub.add_parser("sep-sat", help=f"k-state separator SAT query (budget from ${BUDGET_ENV})")
    s.add_argument("--instance", required=True, choices=["p2", "p5", "sq1", "sq4"])
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--dimacs")
    s.add_argument("--decode")
    s.add_argument("--no-symmetry", action="store_true")
    s.set_defaults(fn=cmd_sep_sat)

    m = sub.add_parser("member", help="lasso membership in a reference language or automaton")
    m.add_argument("--language", required=True)
    m.add_argument("--lasso", required=True, help="u:v for u.v^omega")
    m.set_defaults(fn=cmd_member)

    rp = sub.add_parser("reproduce", help="run lemma drivers and write a report")
    rp.add_argument("ids", nargs="*")
    rp.add_argument("--all", action="store_true")
    rp.add_argument("--list", action="store_true")
    rp.add_argument("--report")
    rp.add_argument("--jobs", type=int)
    rp.set_defaults(fn=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sep-sat" and args.k < 1:
        parser.error("--k must be positive")
    try:
        return args.fn(args)
    except (UsageError, AutomatonError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
