"""The ``gca`` command.

Every command loads a problem file (``--input``, default: the shipped example
zoo), runs one engine operation and prints a JSON report.  Exit codes: 0 for
any decided answer (false verdicts included), 2 when a budget ran out, 3 for
parse or validation failures, 4 for other engine errors.
"""

import argparse
import json
import sys
import time
from importlib import resources

from . import __version__
from .errors import BudgetExceeded, GcaError, ParseError, ValidationError
from .language import Budget, compare, member
from .problem import GroupCatalog, parse_problem, parse_text, shift_to_json

EXIT_OK, EXIT_BUDGET, EXIT_INVALID, EXIT_ENGINE = 0, 2, 3, 4
COMMANDS = ("member", "compare", "project", "image", "kernel", "spacetime", "trace",
            "limitset", "analyze", "entropy", "orbit")


class Report:
    def __init__(self, command, inputs, budget, problem):
        self.command = command
        self.inputs = inputs
        self.budget = budget
        self.verdicts = []
        self.presentations = {}
        self.stats = {}
        self.catalog = GroupCatalog(problem.groups)

    def verdict(self, prop, value, certificate=None, **extra):
        from .ca import _describe
        entry = {"property": prop, "verdict": value}
        if certificate is not None:
            entry["certificate"] = _describe(certificate)
        entry.update(extra)
        self.verdicts.append(entry)

    def present(self, name, x):
        gname = self.catalog.name(x.group)
        self.presentations[name] = shift_to_json(x, gname)
        if getattr(x, "info", None):
            self.stats.setdefault("info", {})[name] = _jsonable(x.info)

    def as_dict(self):
        out = {"command": self.command, "inputs": self.inputs, "verdicts": self.verdicts}
        if self.presentations:
            out["presentations"] = {"groups": dict(self.catalog.entries), "shifts": self.presentations}
        out.update(stats=self.stats, version=__version__, budget=self.budget.as_dict())
        return out


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):
        return v.item()
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return repr(v)


def load_problem(path):
    if path is None:
        text = resources.files("gca").joinpath("data/zoo.json").read_text(encoding="utf-8")
        return parse_text(text, source="zoo")
    return parse_problem(path)


def _lookup(table, name, kind):
    if name not in table:
        raise ValidationError(f"unknown {kind} {name!r}; known: {sorted(table)}", witness=name)
    return table[name]


def _shift_or_domain(pf, name):
    if name in pf.shifts:
        return pf.shifts[name]
    if name in pf.maps:
        return pf.maps[name].domain
    raise ValidationError(f"unknown shift {name!r}; known: {sorted(pf.shifts)}", witness=name)


def _budget(args, pf):
    b = pf.budget
    return Budget(max_period=args.budget_period or b.max_period,
                  max_box=args.budget_box or b.max_box,
                  max_steps=args.budget_steps or b.max_steps)


# -- commands ------------------------------------------------------------------------

def cmd_member(args, pf, rep, budget):
    x = _lookup(pf.shifts, args.shift, "shift")
    p = _lookup(pf.patterns, args.pattern, "pattern")
    res = member(p, x, budget)
    rep.verdict("member", bool(res), res.certificate, method=res.method)
    if args.cross_check:
        from .oracle import NotFoundUpTo, oracle_member
        o = oracle_member(p, x, budget.max_period)
        rep.stats["oracle"] = "not_found" if isinstance(o, NotFoundUpTo) else "found"


def cmd_compare(args, pf, rep, budget):
    x1 = _lookup(pf.shifts, args.left, "shift")
    x2 = _lookup(pf.shifts, args.right, "shift")
    res = compare(x1, x2, budget)
    rep.verdict("subset_12", res["subset_12"])
    rep.verdict("subset_21", res["subset_21"])
    rep.verdict("equal", res["equal"])


def cmd_project(args, pf, rep, budget):
    from .projection import project_slice
    x = _lookup(pf.shifts, args.shift, "shift")
    rep.present(f"{args.shift}_slice{args.width}", project_slice(x, args.width, budget))


def cmd_image(args, pf, rep, budget):
    from .projection import image_shift, same_shift
    f = _lookup(pf.maps, args.map, "map")
    img = image_shift(f, budget=budget, route=args.route)
    rep.present(f"image_{args.map}", img)
    if args.cross_check and f.dim == 1:
        other = "generic" if args.route == "automaton" else "automaton"
        alt = image_shift(f, budget=budget, route=other)
        rep.verdict("routes_agree", bool(same_shift(img, alt, budget)))


def cmd_kernel(args, pf, rep, budget):
    from .oned import trimmed_presentation
    from .projection import kernel_shift
    f = _lookup(pf.maps, args.map, "map")
    ker = kernel_shift(f)
    if ker.dim == 1:
        ker = trimmed_presentation(ker)
    rep.present(f"kernel_{args.map}", ker)


def cmd_spacetime(args, pf, rep, budget):
    from .ca import spacetime_shift
    f = _lookup(pf.maps, args.map, "map")
    rep.present(f"spacetime_{args.map}", spacetime_shift(f, budget, with_language=False))


def cmd_trace(args, pf, rep, budget):
    from .ca import trace_shift
    f = _lookup(pf.maps, args.map, "map")
    shape = tuple(tuple(c) for c in json.loads(args.shape)) if args.shape else ((0,) * f.dim,)
    rep.present(f"trace_{args.map}", trace_shift(f, shape, budget))


def cmd_limitset(args, pf, rep, budget):
    from .ca import limit_set, transient_length
    from .projection import same_shift
    f = _lookup(pf.maps, args.map, "map")
    omega = limit_set(f, budget, route=args.route)
    rep.present(f"limitset_{args.map}", omega)
    rep.stats["transient_length"] = transient_length(f, budget)
    if args.cross_check:
        other = "images" if args.route == "projection" else "projection"
        rep.verdict("routes_agree", bool(same_shift(omega, limit_set(f, budget, route=other), budget)))


def cmd_analyze(args, pf, rep, budget):
    from .ca import analyze
    f = _lookup(pf.maps, args.map, "map")
    reports = analyze(f, budget, cross_check=args.cross_check)
    for r in reports:
        d = r.as_dict()
        rep.verdicts.append(_jsonable(d))
    if args.cross_check:
        from .crosscheck import oracle_agreement
        agg = oracle_agreement(f, reports, K=budget.max_period)
        rep.stats["oracle_agreement"] = {"conclusive": agg.conclusive, "agreements": agg.agreements,
                                         "disagreements": _jsonable(agg.disagreements)}


def cmd_entropy(args, pf, rep, budget):
    from .ca import entropy_1d
    x = _shift_or_domain(pf, args.shift)
    est = entropy_1d(x)
    rep.verdict("entropy", est.value, method=est.method)
    rep.stats["block_counts"] = est.block_counts


def cmd_orbit(args, pf, rep, budget):
    from .render import render_orbit
    f = _lookup(pf.maps, args.map, "map")
    c0 = _lookup(pf.configs, args.config, "configuration")
    art = render_orbit(f, c0, args.steps, args.format)
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(art)
        rep.stats["written"] = args.out
    else:
        rep.stats["picture"] = art.splitlines()


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


# -- argument parsing ----------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # usage errors share the validation exit code; 2 is reserved for budgets
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="problem file (JSON); default: the shipped zoo")
    common.add_argument("--budget-period", type=int, help="largest torus period searched")
    common.add_argument("--budget-box", type=int, help="largest box / shape index searched")
    common.add_argument("--budget-steps", type=int, help="search node limit")
    common.add_argument("--cross-check", action="store_true", help="also run independent checks")
    common.add_argument("--report", help="write the JSON report here instead of stdout")

    parser = _Parser(prog="gca", description="Group shifts and group cellular automata.")
    parser.add_argument("--version", action="version", version=f"gca {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("member", parents=[common], help="is a pattern in the language of a shift")
    p.add_argument("shift")
    p.add_argument("pattern")
    p = sub.add_parser("compare", parents=[common], help="containment and equality of two shifts")
    p.add_argument("left")
    p.add_argument("right")
    p = sub.add_parser("project", parents=[common], help="slice projection to width-n strips")
    p.add_argument("shift")
    p.add_argument("--width", type=int, default=1)
    p = sub.add_parser("image", parents=[common], help="image shift of a map")
    p.add_argument("map")
    p.add_argument("--route", choices=("automaton", "generic"), default="automaton")
    for name, text in (("kernel", "kernel shift of a map"), ("spacetime", "space-time shift of an automaton")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("map")
    p = sub.add_parser("trace", parents=[common], help="trace shift of an automaton")
    p.add_argument("map")
    p.add_argument("--shape", help="JSON list of cells, default the origin")
    p = sub.add_parser("limitset", parents=[common], help="limit set of an automaton")
    p.add_argument("map")
    p.add_argument("--route", choices=("projection", "images"), default="projection")
    p = sub.add_parser("analyze", parents=[common], help="run every decision procedure")
    p.add_argument("map")
    p = sub.add_parser("entropy", parents=[common], help="topological entropy of a 1D shift")
    p.add_argument("shift")
    p = sub.add_parser("orbit", parents=[common], help="render a space-time diagram")
    p.add_argument("map")
    p.add_argument("--config", required=True)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--format", choices=("text", "pgm"), default="text")
    p.add_argument("--out")
    return parser


def run_command(cmd, args, pf):
    budget = _budget(args, pf)
    inputs = {k: v for k, v in vars(args).items()
              if k not in ("command", "report", "budget_period", "budget_box", "budget_steps") and v is not None}
    inputs["problem"] = pf.source
    rep = Report(cmd, inputs, budget, pf)
    t = time.perf_counter()
    HANDLERS[cmd](args, pf, rep, budget)
    rep.stats["seconds"] = round(time.perf_counter() - t, 4)
    return rep


def _emit(payload, path):
    text = json.dumps(payload, indent=2, default=repr)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        pf = load_problem(args.input)
        rep = run_command(args.command, args, pf)
    except (ParseError, ValidationError) as exc:
        _emit({"command": args.command, "error": "validation", "message": str(exc),
               "witness": _jsonable(getattr(exc, "witness", None)),
               "line": getattr(exc, "line", None), "column": getattr(exc, "column", None)}, args.report)
        return EXIT_INVALID
    except BudgetExceeded as exc:
        _emit({"command": args.command, "error": "budget_exceeded", "message": str(exc),
               "frontier": _jsonable(exc.frontier), "version": __version__}, args.report)
        return EXIT_BUDGET
    except GcaError as exc:
        _emit({"command": args.command, "error": type(exc).__name__, "message": str(exc)}, args.report)
        return EXIT_ENGINE
    _emit(rep.as_dict(), args.report)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
