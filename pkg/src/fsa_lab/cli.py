"""Command line entry point: ``fsa-lab <command> ...``.

Primary output goes to stdout (or ``--out``) and is byte-identical across
reruns with the same flags and seed.  Errors go to stderr and map to exit
codes 2 (parse), 3 (contract) and 4 (guardrail).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .automaton import Automaton, Transducer, resolve
from .errors import ContractError, FsaLabError, ParseError


# ------------------------------------------------------------------ helpers

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def _n_list(text: str) -> list[int]:
    try:
        ns = [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad n list {text!r}") from None
    if not ns or any(n < 1 for n in ns) or any(a >= b for a, b in zip(ns, ns[1:])):
        raise argparse.ArgumentTypeError("n list must be positive and strictly increasing")
    return ns


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _coeff(text: str) -> Fraction:
    try:
        c = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad coefficient {text!r}") from None
    if c < 0:
        raise argparse.ArgumentTypeError("wire coefficient must be non-negative")
    return c


def _automaton(source: str) -> Automaton:
    M = resolve(source)
    if not isinstance(M, Automaton):
        raise ContractError(f"{source}: this command needs a moore automaton")
    return M


def _word(text: str, alphabet: Sequence[str]) -> list[str]:
    if "," in text or " " in text:
        return [t for t in text.replace(",", " ").split() if t]
    if all(len(a) == 1 for a in alphabet):
        return list(text)
    raise ParseError("multi-character letters must be separated by commas")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _fit_comment(results) -> list[str]:
    from .delay import fit_growth
    pts = [(r.n, r.summary["mean"]) for r in results]
    try:
        return [fit_growth(pts).describe()]
    except ContractError as e:
        return [f"fit skipped: {e}"]


# ----------------------------------------------------------------- commands

def cmd_classify(args) -> None:
    from .classify import classify
    sys.stdout.write(classify(_automaton(args.source)).to_json())


def cmd_sweep(args) -> None:
    from .delay import simulate_average, write_csv
    M = resolve(args.source)
    results = [simulate_average(M, n, args.trials, args.model, args.seed, args.wire_coeff,
                                args.encoding, name=args.source)
               for n in args.n_list]
    _emit(write_csv(results, comments=_fit_comment(results)), args.out)


def cmd_depend(args) -> None:
    from .delay import dependence_set_exact
    found = dependence_set_exact(_automaton(args.source), args.n, args.m)
    sys.stdout.write("{" + ",".join(str(i) for i in sorted(found)) + "}\n")


def cmd_witness(args) -> None:
    from .classify import check_family, witness_non_definite, witness_non_gen_definite
    M = _automaton(args.source)
    if args.property == "definite":
        w = witness_non_definite(M)
    else:
        w = witness_non_gen_definite(M, args.m)
        check_family(M, w, args.m)
    sys.stdout.write(_json(w.to_dict()))


def cmd_synth(args) -> None:
    from .circuit import cost, logical_depth, physical_depth, synth_prefix, synth_standard
    M = resolve(args.source)
    if args.style == "prefix":
        if not isinstance(M, Automaton):
            raise ContractError("prefix synthesis needs a moore automaton")
        C = synth_prefix(M, args.n, args.wire_coeff)
    else:
        C = synth_standard(M, args.n, args.encoding, args.wire_coeff)
    gates, wire = cost(C)
    metrics = {"n": C.n, "style": args.style, "encoding": args.encoding,
               "gates": gates, "wire": str(wire),
               "logical_depth": logical_depth(C), "physical_depth": str(physical_depth(C)),
               "max_gates_per_position": C.max_gates_per_position()}
    if args.out:
        C.save(args.out)
        sys.stdout.write(_json(metrics))
    else:
        sys.stdout.write(_json({"metrics": metrics, "circuit": C.to_dict()}))


def cmd_delay(args) -> None:
    from .circuit import load_circuit, logical_depth, physical_depth
    from .delay import settle, simulate_circuit, uniform_words, write_csv, SimResult
    C = load_circuit(args.circuit)
    if args.wire_coeff is not None:
        C = C.with_coeff(args.wire_coeff)
    if args.mode == "static":
        sys.stdout.write(_json({"logical_depth": logical_depth(C),
                                "physical_depth": str(physical_depth(C))}))
    elif args.mode == "settle":
        if args.word is None:
            raise ParseError("settle mode needs --word")
        prof = settle(C, _word(args.word, C.input_alphabet))
        times = [None if not np.isfinite(t) else float(t) for t in prof.settle_times]
        sys.stdout.write(_json({"outputs": prof.decoded, "settle_times": times,
                                "delay": prof.delay if np.isfinite(prof.delay) else None}))
    else:
        nA = len(C.input_alphabet)
        delays, bad = simulate_circuit(C, lambda n, s, ids: uniform_words(nA, n, s, ids),
                                       args.trials, args.seed)
        res = SimResult(Path(args.circuit).stem, C.n, args.trials, "uniform", args.seed,
                        delays, float(C.wire_coeff), bad)
        _emit(write_csv([res]), args.out)


def cmd_zeck(args) -> None:
    from . import zeckendorf as Z
    if args.zcmd == "add":
        a, b = _operands(args.a, args.b)
        s = Z.pipeline_add(a, b)
        if s != Z.zeck_add_oracle(a, b):
            raise ContractError("pipeline disagrees with the arithmetic oracle")
        digits = s.stripped()
        if args.order == "lsd":
            digits = digits[::-1]
        sys.stdout.write(f"{digits} (={s.value})\n")
    elif args.zcmd == "sample":
        lines = []
        for t in range(args.count):
            w = Z.markov_sample(args.n, args.seed, t)
            lines.append(f"{w} (={w.value})\n")
        _emit("".join(lines), args.out)
    elif args.zcmd == "pipeline-sim":
        from .delay import write_csv
        results = [Z.pipeline_delay_sim(n, args.trials, args.seed, args.wire_coeff)
                   for n in args.n_list]
        _emit(write_csv(results, comments=_fit_comment(results)), args.out)
    elif args.zcmd == "check-pipeline":
        P = Z.load_pipeline(args.pipeline) if args.pipeline else Z.default_pipeline()
        report = Z.check_reset_properties(P)
        sys.stdout.write("".join(r.line() + "\n" for r in report))
        failed = [r for r in report if not r.holds]
        if failed:
            raise ContractError(f"{len(failed)} reset propert{'y' if len(failed) == 1 else 'ies'} failed")
    else:
        path = Z.default_pipeline().export(args.directory)
        sys.stdout.write(f"{path}\n")


def _operands(x: str, y: str):
    """Decimal integers by default; 0b-prefixed text is read as digit strings."""
    from . import zeckendorf as Z
    words = []
    for t in (x, y):
        if t.startswith("0b"):
            words.append(Z.ZeckWord.parse(t[2:]))
        else:
            try:
                v = int(t)
            except ValueError:
                raise ParseError(f"{t!r} is not an integer") from None
            words.append(Z.zeck_encode(v, Z.width_for(v)))
    n = max(w.n for w in words)
    return words[0].padded(n), words[1].padded(n)


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fsa-lab", description="Finite automata as circuits.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="classification report as JSON")
    c.add_argument("source", help="builtin name or machine file")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("sweep", help="average settle delay over a list of n")
    c.add_argument("source")
    c.add_argument("--n-list", type=_n_list, required=True)
    c.add_argument("--trials", type=_positive, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--model", choices=("uniform", "zeckendorf"), default="uniform")
    c.add_argument("--wire-coeff", type=_coeff, default=Fraction(1))
    c.add_argument("--encoding", choices=("closure", "full"), default="closure")
    c.add_argument("--out")
    c.set_defaults(func=cmd_sweep)

    c = sub.add_parser("depend", help="input positions the m-th output depends on")
    c.add_argument("source")
    c.add_argument("n", type=_positive)
    c.add_argument("m", type=_positive)
    c.set_defaults(func=cmd_depend)

    c = sub.add_parser("witness", help="pumping witness against (generalized) definiteness")
    c.add_argument("source")
    c.add_argument("property", choices=("definite", "gen-definite"))
    c.add_argument("--m", type=_positive, default=2, help="family index checked")
    c.set_defaults(func=cmd_witness)

    c = sub.add_parser("synth", help="build a circuit for n steps")
    c.add_argument("source")
    c.add_argument("--n", type=_positive, required=True)
    c.add_argument("--style", choices=("standard", "prefix"), default="standard")
    c.add_argument("--encoding", choices=("closure", "full"), default="closure")
    c.add_argument("--wire-coeff", type=_coeff, default=Fraction(1))
    c.add_argument("--out")
    c.set_defaults(func=cmd_synth)

    c = sub.add_parser("delay", help="static depths, one settle run, or random settle runs")
    c.add_argument("circuit")
    c.add_argument("mode", choices=("static", "settle", "random"))
    c.add_argument("--word")
    c.add_argument("--trials", type=_positive, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--wire-coeff", type=_coeff)
    c.add_argument("--out")
    c.set_defaults(func=cmd_delay)

    z = sub.add_parser("zeck", help="Zeckendorf addition experiments")
    zs = z.add_subparsers(dest="zcmd", required=True, parser_class=_Parser)
    c = zs.add_parser("add", help="add two numbers through the three-pass pipeline")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--order", choices=("msd", "lsd"), default="msd")
    c = zs.add_parser("sample", help="uniform random Zeckendorf words")
    c.add_argument("--n", type=_positive, required=True)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--count", type=_positive, default=1)
    c.add_argument("--out")
    c = zs.add_parser("pipeline-sim", help="average settle delay of the addition circuit")
    c.add_argument("--n-list", type=_n_list, required=True)
    c.add_argument("--trials", type=_positive, default=200)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--wire-coeff", type=_coeff, default=Fraction(1))
    c.add_argument("--out")
    c = zs.add_parser("check-pipeline", help="verify the reset and zero-run properties")
    c.add_argument("--pipeline", help="descriptor file or directory")
    c = zs.add_parser("export-pipeline", help="write the pass tables and descriptor")
    c.add_argument("directory")
    z.set_defaults(func=cmd_zeck)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.func(args)
    except FsaLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
