"""Command line front end.

Exit codes: 0 success, 1 invalid input or failed verification, 2 a
resource cap was hit. Reports are ``key: value`` lines on stdout.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .algebra import transition_monoid
from .errors import ConstructionError, GcdObstruction, ResourceCapExceeded, VerificationFailed
from .io import (
    FormatError,
    emit_classes,
    emit_system,
    format_word,
    parse_alphabet,
    parse_classes,
    parse_dfa,
    parse_system,
    parse_word,
)
from .rewriting import count_irr, normalize, verify_crs
from .synthesis import STRATEGIES, SynthesisOptions, recognize

OK, INVALID, CAPPED = 0, 1, 2


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None


def _err(msg: str):
    print(f"error: {msg}", file=sys.stderr)


def _load_system(path: str):
    return parse_system(_read(path), path)


def cmd_synth(args) -> int:
    alphabet = parse_alphabet(_read(args.alphabet), args.alphabet)
    dfa = parse_dfa(_read(args.dfa), alphabet, args.dfa)
    opts = SynthesisOptions(
        strategy=args.strategy,
        max_rules=args.max_rules,
        max_irr=args.max_irr,
        max_nodes=args.max_nodes,
        retries=args.retries,
        t_omega=args.t_omega,
        t_policy=args.t_policy,
        check_length=args.check_length,
    )
    start = time.perf_counter()
    try:
        lang = recognize(dfa, opts)
    except ResourceCapExceeded as exc:
        _err(str(exc))
        print("status: cap_exceeded")
        print(f"stage: {exc.stage}")
        for k, v in exc.details.items():
            print(f"{k}: {v}")
        for line in opts.trace:
            print(f"path: {line}")
        return CAPPED
    except GcdObstruction as exc:
        _err(str(exc))
        print("status: obstruction")
        print(f"kernel_gcd: {exc.kernel_gcd}")
        print(f"prime: {exc.prime}")
        return INVALID
    elapsed = time.perf_counter() - start
    tm = transition_monoid(dfa)
    report = verify_crs(lang.system, tm.hom)
    out = Path(args.out)
    out.write_text(emit_system(lang.system))
    Path(f"{out}.classes").write_text(emit_classes(lang.accepting_forms()))
    lines = [
        "status: ok",
        f"system: {out}",
        f"classes: {out}.classes",
        f"strategy: {args.strategy}",
        f"alphabet_size: {len(alphabet)}",
        f"monoid_size: {len(tm.monoid)}",
        *report.lines(),
        f"accepting_classes: {len(lang.accepting_classes)}",
        f"checked_length: {opts.check_length}",
        f"seconds: {elapsed:.3f}",
        *(f"path: {line}" for line in lang.path),
    ]
    Path(f"{out}.report").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return OK if report.passed else INVALID


def cmd_check(args) -> int:
    S = _load_system(args.system)
    if args.alphabet:
        declared = parse_alphabet(_read(args.alphabet), args.alphabet)
        if declared != S.alphabet:
            _err(f"alphabet of {args.system} differs from {args.alphabet}")
            return INVALID
    phi = None
    if args.dfa:
        phi = transition_monoid(parse_dfa(_read(args.dfa), S.alphabet, args.dfa)).hom
    report = verify_crs(S, phi, args.max_pairs)
    print("\n".join(report.lines()))
    if not report.passed:
        _err(report.summary())
        return INVALID
    return OK


def cmd_member(args) -> int:
    S = _load_system(args.system)
    classes = parse_classes(_read(args.classes), S.alphabet, args.classes)
    for text in args.words:
        word = parse_word(text, S.alphabet)
        nf, steps = normalize(S, word)
        assert steps <= S.alphabet.weight(word), "more rewrite steps than the word weight"
        print(f"word: {format_word(word)}")
        print(f"normal_form: {format_word(nf)}")
        print(f"steps: {steps}")
        print(f"member: {'accept' if nf in classes else 'reject'}")
    return OK


def cmd_normalize(args) -> int:
    S = _load_system(args.system)
    word = parse_word(args.word, S.alphabet)
    nf, trace = normalize(S, word, trace=True)
    print(f"normal_form: {format_word(nf)}")
    print(f"steps: {len(trace)}")
    for pos, k in trace:
        print(f"step: {pos} {k} {S.rules[k]}")
    return OK


def cmd_stats(args) -> int:
    S = _load_system(args.system)
    lhs = [S.alphabet.weight(r.lhs) for r in S]
    index = count_irr(S)
    print(f"rules: {len(S)}")
    print(f"alphabet_size: {len(S.alphabet)}")
    print(f"max_lhs_weight: {max(lhs, default=0)}")
    print(f"min_lhs_weight: {min(lhs, default=0)}")
    print(f"weight_reducing: {'yes' if S.weight_violation is None else 'no'}")
    print(f"irr_finite: {'yes' if index is not None else 'no'}")
    print(f"index: {index if index is not None else 'infinite'}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="crsynth", description="Weighted Church-Rosser systems for regular languages.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="build a system recognizing the language of a DFA")
    s.add_argument("--dfa", required=True)
    s.add_argument("--alphabet", required=True)
    s.add_argument("--strategy", choices=STRATEGIES, default="auto")
    s.add_argument("-o", "--out", required=True, help="system file; .report and .classes are written next to it")
    s.add_argument("--max-rules", type=int, default=10**6)
    s.add_argument("--max-irr", type=int, default=10**6)
    s.add_argument("--max-nodes", type=int, default=2 * 10**6, help="search budget for marker rules")
    s.add_argument("--retries", type=int, default=3)
    s.add_argument("--t-omega", type=int, default=None)
    s.add_argument("--t-policy", choices=("minimal", "formula"), default="minimal")
    s.add_argument("--check-length", type=int, default=10)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("check", help="verify a system file")
    s.add_argument("system")
    s.add_argument("--alphabet")
    s.add_argument("--dfa")
    s.add_argument("--max-pairs", type=int, default=None)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("member", help="decide membership through normal forms")
    s.add_argument("system")
    s.add_argument("classes")
    s.add_argument("words", nargs="*")
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("normalize", help="print the normal form and rewrite trace")
    s.add_argument("system")
    s.add_argument("word")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("stats", help="summarize a system file")
    s.add_argument("system")
    s.set_defaults(func=cmd_stats)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceCapExceeded as exc:
        _err(str(exc))
        return CAPPED
    except (FormatError, VerificationFailed, ConstructionError, ValueError) as exc:
        _err(str(exc))
        return INVALID


if __name__ == "__main__":
    sys.exit(main())
