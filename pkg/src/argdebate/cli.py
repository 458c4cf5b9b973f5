"""Command-line entry point: ``argdebate {solve,translate,check,bench,gen}``.

Exit codes: 0 true/success, 1 false, 2 usage error, 3 timeout or resource
limit, 4 I/O or parse error.
"""

import argparse
import sys
from pathlib import Path

from . import __version__
from . import bench as bench_mod
from . import checker, interpreted, logic
from . import framework as fw
from .interpreted import AgentId
from .errors import ApxParseError, FormulaSyntaxError, FrameworkError, ResourceExceeded

EXIT_TRUE, EXIT_FALSE, EXIT_USAGE, EXIT_LIMIT, EXIT_IO = 0, 1, 2, 3, 4

SEMANTICS = [k.value for k in fw.SemanticsKind]
CHECK_SEMANTICS = ["grounded", "admissible", "ideal"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # report usage problems as exceptions so main() can return the code
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def build_parser():
    parser = _Parser(prog="argdebate", description="Argumentation semantics via strategy-logic model checking.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="extensions of a framework under a semantics")
    p.add_argument("af", help="framework in apx format")
    p.add_argument("semantics", choices=SEMANTICS)
    p.add_argument("--arg", dest="argument", help="only report whether this argument is accepted")
    p.add_argument("--all", action="store_true", help="list every extension, one per line")
    p.add_argument("--max-args", type=int, default=fw.MAX_ENUMERATION_ARGS,
                   help="refuse exhaustive enumeration above this size (default %(default)s)")

    p = sub.add_parser("translate", help="dump the debate interpreted system")
    p.add_argument("af")
    p.add_argument("root")
    p.add_argument("--out", help="write the listing here instead of stdout")
    p.add_argument("--state-space", choices=["full", "collapsed"], default="full")
    p.add_argument("--max-states", type=int, default=interpreted.MAX_STATES)

    p = sub.add_parser("check", help="model check acceptance of an argument")
    p.add_argument("af", nargs="?")
    p.add_argument("root", nargs="?")
    p.add_argument("semantics", nargs="?", choices=CHECK_SEMANTICS)
    p.add_argument("--af", dest="af_opt", metavar="FILE")
    p.add_argument("--root", dest="root_opt", metavar="ARG")
    p.add_argument("--semantics", dest="semantics_opt", choices=CHECK_SEMANTICS)
    p.add_argument("--engine", choices=list(checker.ENGINES), default="sl")
    p.add_argument("--timeout", type=float, help="wall-clock budget in seconds")
    p.add_argument("--max-strategies", type=int, help="budget on enumerated strategies")
    p.add_argument("--witness", action="store_true", help="print the proponent's winning choices")
    p.add_argument("--formula-file", help="check this formula instead of the semantics formula")
    p.add_argument("--state-space", choices=["collapsed", "full"], default="collapsed")
    p.add_argument("--max-states", type=int, default=interpreted.MAX_STATES)

    p = sub.add_parser("bench", help="run a benchmark configuration")
    p.add_argument("--config", required=True, help="TOML configuration file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=int, help="override the configured worker count")

    p = sub.add_parser("gen", help="generate a random framework")
    p.add_argument("n", type=int)
    p.add_argument("p", type=float)
    p.add_argument("seed", type=int)
    p.add_argument("--out", help="write here instead of stdout")
    return parser


def _emit(text, out, path=None):
    if path is None:
        out.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _cmd_solve(args, out):
    af = fw.read_apx(args.af)
    kind = fw.SemanticsKind.parse(args.semantics)
    if args.argument is not None:
        af.check_argument(args.argument)
        value = fw.accepted(af, args.argument, kind, args.max_args)
        out.write(f"{'true' if value else 'false'}\n")
        return EXIT_TRUE if value else EXIT_FALSE
    exts = fw.extensions(af, kind, args.max_args)
    for e in exts if args.all else exts[:1]:
        out.write(fw.format_set(e) + "\n")
    return EXIT_TRUE


def _cmd_translate(args, out):
    af = fw.read_apx(args.af)
    af.check_argument(args.root)
    system = interpreted.build(af, args.root, track_seen=args.state_space == "full",
                               max_states=args.max_states)
    _emit(system.listing(), out, args.out)
    return EXIT_TRUE


def _pick(positional, option, name):
    if positional is not None and option is not None and positional != option:
        raise _UsageError(f"argdebate check: error: {name} given twice with different values")
    value = positional if positional is not None else option
    if value is None:
        raise _UsageError(f"argdebate check: error: missing {name}")
    return value


def _cmd_check(args, out):
    af_path = _pick(args.af, args.af_opt, "framework file")
    root = _pick(args.root, args.root_opt, "root argument")
    formula = None
    if args.formula_file is not None:
        if args.engine != "sl":
            raise _UsageError("argdebate check: error: --formula-file needs the sl engine")
        semantics = args.semantics or args.semantics_opt
    else:
        semantics = _pick(args.semantics, args.semantics_opt, "semantics")
        if args.engine == "fixpoint" and semantics != "grounded":
            raise _UsageError("argdebate check: error: the fixpoint engine only decides grounded")
    af = fw.read_apx(af_path)
    af.check_argument(root)
    if args.formula_file is not None:
        formula = logic.parse_formula(Path(args.formula_file).read_text(encoding="utf-8"), af)
    budget = checker.Budget(args.timeout, args.max_strategies)
    track = args.state_space == "full"
    if formula is None:
        verdict = checker.decide(af, root, semantics, args.engine, budget, track, args.max_states)
        system = None
    else:
        system = interpreted.build(af, root, track_seen=track, max_states=args.max_states)
        verdict = checker.check(system, formula, budget)
    out.write(verdict.line() + "\n")
    if args.witness and verdict.witness is not None:
        if formula is None:
            system = interpreted.build(af, root, track_seen=track, max_states=args.max_states)
        _write_witness(out, system, verdict.witness)
    if verdict.value is None:
        return EXIT_LIMIT
    return EXIT_TRUE if verdict.value else EXIT_FALSE


def _write_witness(out, system, witness):
    if witness.agent is AgentId.PRO:
        for x, y in checker.to_proponent_strategy(system, witness).items():
            out.write(f"{x} -> {y}\n")
    else:
        for s, act in sorted(witness.table.items()):
            out.write(f"{system.global_state(s)} -> {act}\n")


def _cmd_bench(args, out):
    cfg = bench_mod.BenchConfig.from_toml(args.config)
    if args.workers is not None:
        cfg = bench_mod.BenchConfig(cfg.buckets, cfg.seed, cfg.timeout, cfg.engines, args.workers)
    records, rows = bench_mod.run_to_dir(cfg, args.out)
    out.write(bench_mod.render_markdown(rows))
    bad = bench_mod.disagreements(records)
    for key, answers in bad:
        print(f"disagreement on {key}: {answers}", file=sys.stderr)
    return EXIT_FALSE if bad else EXIT_TRUE


def _cmd_gen(args, out):
    if args.n < 1 or not 0.0 <= args.p <= 1.0:
        raise _UsageError("argdebate gen: error: need n >= 1 and 0 <= p <= 1")
    _emit(fw.emit_apx(fw.generate_random(args.n, args.p, args.seed)), out, args.out)
    return EXIT_TRUE


_COMMANDS = {
    "solve": _cmd_solve,
    "translate": _cmd_translate,
    "check": _cmd_check,
    "bench": _cmd_bench,
    "gen": _cmd_gen,
}


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        err.write(parser.format_usage() + str(exc) + "\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version
        return exc.code or 0
    try:
        return _COMMANDS[args.command](args, out)
    except _UsageError as exc:
        err.write(str(exc) + "\n")
        return EXIT_USAGE
    except (OSError, ApxParseError, FormulaSyntaxError, UnicodeDecodeError) as exc:
        err.write(f"argdebate: error: {exc}\n")
        return EXIT_IO
    except ResourceExceeded as exc:
        err.write(f"argdebate: resource limit: {exc}\n")
        return EXIT_LIMIT
    except (FrameworkError, ValueError) as exc:
        # config parse errors are ValueError subclasses too
        name = type(exc).__name__
        code = EXIT_IO if name == "TOMLDecodeError" else EXIT_USAGE
        err.write(f"argdebate: error: {exc}\n")
        return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
