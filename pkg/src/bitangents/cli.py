"""Command-line interface: ``bitangents <command> [flags]``.

Exit status 0 on success, 1 on domain errors (degenerate configurations,
missing square roots, oracle disagreement, ...), 2 on usage and schema errors.
With --output the structured report is written to that file; ``klein`` and
``derive-sections`` write a dataset there instead.
"""

import argparse
import sys

from . import oracle
from .curve import curve_sanity, derive_section, smoothness_spot_check, square_part, verify_section
from .dataset import builtin_klein, dataset_digest, dumps_dataset, dumps_report, load_dataset, make_report
from .errors import DomainError, IdentityViolated, Inconsistent, UsageError
from .exactfield import DEFAULT_SQRT_PRECISION, elem_embed
from .pairing import PairingTable
from .topology import (
    classify_subsets,
    connected_number_det,
    connected_number_liftgraph,
    connected_number_triple,
    parity_identity_check,
    subarrangement_invariant,
)

COMMANDS = (
    "klein",
    "verify",
    "derive-sections",
    "gram",
    "connected",
    "invariants",
    "parity",
    "classify",
    "find-bitangents",
    "oracle-connected",
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", metavar="FILE", help="dataset file (default: built-in Klein quartic)")
    common.add_argument("--output", metavar="FILE", help="write the report (or dataset) here")
    common.add_argument("--indices", metavar="I,J,K", help="line names or 1-based positions, comma separated")
    common.add_argument("--size", type=int, help="subset size for classify")
    common.add_argument("--precision", type=int, help="working precision in bits")
    common.add_argument("--tolerance", type=float, default=oracle.MATCH_TOL, help="numeric match tolerance")
    common.add_argument("--format", choices=("text", "structured"), default="text")

    parser = _Parser(prog="bitangents", description="Bitangent arrangements of plane quartics: exact and numeric tools.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("klein", parents=[common], help="write the built-in Klein quartic dataset")
    sub.add_parser("verify", parents=[common], help="check lines, sections and the configuration")
    sub.add_parser("derive-sections", parents=[common], help="compute y(t) with y^2 = F|_L for each line")
    sub.add_parser("gram", parents=[common], help="sign matrix (twice the height pairing)")
    p = sub.add_parser("connected", parents=[common], help="connected number of a line arrangement")
    p.add_argument("--oracle", action="store_true", help="cross-check against the numeric oracle")
    p.add_argument("--embedding", type=int, default=1, help="complex embedding zeta -> exp(2 pi i k / n)")
    sub.add_parser("invariants", parents=[common], help="subarrangement invariant (#c=1, #c=2)")
    sub.add_parser("parity", parents=[common], help="check m_I(n-2) = 2M + #c^-1(2)")
    p = sub.add_parser("classify", parents=[common], help="group subsets by invariant pair")
    p.add_argument("--limit", type=int, default=10**6, help="refuse to enumerate more subsets than this")
    p = sub.add_parser("find-bitangents", parents=[common], help="numeric bitangent search")
    p.add_argument("--seeds", type=int, default=200)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--embedding", type=int, default=1)
    p.add_argument("--expected", type=int, help="fail unless at least this many lines are found")
    p = sub.add_parser("oracle-connected", parents=[common], help="connected number from numeric sheets")
    p.add_argument("--embedding", type=int, default=1)
    return parser


# --- helpers ------------------------------------------------------------------

class _Context:
    def __init__(self, args):
        self.args = args
        self.dataset = load_dataset(args.input) if args.input else builtin_klein()
        self._derived = {}

    @property
    def precision(self):
        return self.args.precision or DEFAULT_SQRT_PRECISION

    def positions(self, default_all=True, minimum=1):
        if self.args.indices is None:
            if not default_all:
                raise UsageError(f"{self.args.command} needs --indices")
            pos = list(range(len(self.dataset.lines)))
        else:
            tokens = [tok for tok in self.args.indices.split(",") if tok.strip()]
            pos = [self.dataset.resolve(tok) for tok in tokens]
        if len(set(pos)) != len(pos):
            raise UsageError("--indices lists a line twice")
        if len(pos) < minimum:
            raise UsageError(f"{self.args.command} needs at least {minimum} lines")
        return pos

    def names(self, positions):
        return [self.dataset.lines[p].name for p in positions]

    def section(self, p):
        line = self.dataset.lines[p]
        if line.name in self.dataset.sections:
            return self.dataset.sections[line.name]
        if line.name not in self._derived:
            self._derived[line.name] = derive_section(self.dataset.curve, line, precision=self.precision)
        return self._derived[line.name]

    def table(self, positions):
        return PairingTable([self.section(p) for p in positions], self.names(positions))

    def inputs(self):
        return {
            "dataset": self.args.input or "builtin:klein",
            "digest": dataset_digest(self.dataset),
            "indices": self.args.indices,
        }


def _fmt_elem(x):
    return repr(x)


def _fmt_complex(z):
    return f"{z.real:+.12f}{z.imag:+.12f}i"


# --- commands -----------------------------------------------------------------
# each returns (results dict, text lines)

def cmd_klein(ctx):
    ds = ctx.dataset if ctx.args.input else builtin_klein()
    if ctx.args.output:
        with open(ctx.args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps_dataset(ds))
    results = {"field_order": ds.order, "lines": ds.names(), "sections": sorted(ds.sections)}
    text = [f"Klein quartic over Q(zeta_{ds.order}): {len(ds.lines)} lines, {len(ds.sections)} printed sections"]
    if ctx.args.output:
        text.append(f"dataset written to {ctx.args.output}")
    else:
        text.append(dumps_dataset(ds).rstrip())
    return results, text


def cmd_verify(ctx):
    ds = ctx.dataset
    pos = ctx.positions()
    lines = [ds.lines[p] for p in pos]
    per_line, text, failures = {}, [], []
    for line in lines:
        try:
            square_part(ds.curve, line)
            status = "bitangent"
        except DomainError as exc:
            status = f"FAIL: {exc}"
            failures.append(line.name)
        entry = {"bitangent": status == "bitangent"}
        if line.name in ds.sections:
            entry["section"] = verify_section(ds.curve, ds.sections[line.name])
            if not entry["section"]:
                failures.append(line.name)
            status += ", section ok" if entry["section"] else ", section FAILS y^2 = F|_L"
        per_line[line.name] = entry
        text.append(f"{line.name}: {status}")
    sanity = curve_sanity(ds.curve, lines)
    names = [ln.name for ln in lines]
    sanity_dict = {
        key: [[names[i] for i in item] for item in getattr(sanity, key)]
        for key in ("identical_pairs", "concurrent_triples", "on_curve_pairs")
    }
    sanity_dict["hyperflex_lines"] = [names[i] for i in sanity.hyperflex_lines]
    sanity_dict["warnings"] = list(sanity.warnings)
    warnings = smoothness_spot_check(ds.curve)
    text.append(f"concurrent triples: {len(sanity.concurrent_triples)}")
    text.append(f"pairs meeting on the quartic: {len(sanity.on_curve_pairs)}")
    text.append(f"identical pairs: {len(sanity.identical_pairs)}")
    text += [f"warning: {w}" for w in sanity.warnings + warnings]
    results = {"lines": per_line, "sanity": sanity_dict, "smoothness_warnings": warnings}
    if failures:
        raise _Failed(Inconsistent(f"verification failed for {', '.join(sorted(set(failures)))}"), results, text)
    return results, text


def cmd_derive_sections(ctx):
    ds = ctx.dataset
    pos = ctx.positions()
    out, text = {}, []
    for p in pos:
        line = ds.lines[p]
        sec = derive_section(ds.curve, line, precision=ctx.precision)
        printed = ds.sections.get(line.name)
        agree = None
        if printed is not None:
            agree = printed.c == sec.c and printed.d == sec.d and printed.e == sec.e
            if not agree and printed.c == -sec.c and printed.d == -sec.d and printed.e == -sec.e:
                agree = "up to sign"
            sec = printed if agree else sec
        out[line.name] = {"c": _fmt_elem(sec.c), "d": _fmt_elem(sec.d), "e": _fmt_elem(sec.e), "matches_dataset": agree}
        ctx._derived[line.name] = sec
        note = "" if agree is None else f"  (dataset section: {'same' if agree is True else agree or 'DIFFERENT'})"
        text.append(f"{line.name}: y = ({sec.c}) t^2 + ({sec.d}) t + ({sec.e}){note}")
        if agree is False:
            raise _Failed(Inconsistent(f"{line.name}: dataset section differs from the derived one"), out, text)
    if ctx.args.output:
        for name, sec in ctx._derived.items():
            ds.sections.setdefault(name, sec)
        with open(ctx.args.output, "w", encoding="utf-8") as fh:
            fh.write(dumps_dataset(ds))
        text.append(f"dataset with sections written to {ctx.args.output}")
    return {"sections": out}, text


def cmd_gram(ctx):
    pos = ctx.positions(default_all=False, minimum=2)
    G = ctx.table(pos).gram()
    return {"indices": list(G.indices), "matrix": G.tolist(), "m_I": G.minus_count}, [str(G)]


def cmd_connected(ctx):
    pos = ctx.positions(default_all=False, minimum=2)
    table = ctx.table(pos)
    values = {"liftgraph": connected_number_liftgraph(table)}
    if len(pos) == 3:
        G = table.gram()
        values["parity"] = connected_number_triple(G)
        values["det"] = connected_number_det(G)
    results = {"indices": ctx.names(pos), "connected_number": values}
    oracle_part = None
    if ctx.args.oracle:
        lines = [ctx.dataset.lines[p] for p in pos]
        numeric = oracle.connected_number_numeric(
            ctx.dataset.curve, lines, k=ctx.args.embedding, tolerance=ctx.args.tolerance,
            precision=ctx.args.precision or 53,
        )
        oracle_part = {"connected_number": numeric, "embedding": ctx.args.embedding}
        values["oracle"] = numeric
    if len(set(values.values())) != 1:
        raise _Failed(Inconsistent(f"methods disagree: {values}"), results, [str(values)])
    text = [f"c = {values['liftgraph']}  ({', '.join(f'{k}={v}' for k, v in values.items())})"]
    return results, text, oracle_part


def cmd_invariants(ctx):
    pos = ctx.positions(default_all=False, minimum=3)
    pair = subarrangement_invariant(ctx.table(pos))
    return {"indices": ctx.names(pos), "invariant": list(pair)}, [str(pair)]


def cmd_parity(ctx):
    pos = ctx.positions(default_all=False, minimum=3)
    rep = parity_identity_check(ctx.table(pos))
    results = {"indices": ctx.names(pos), "m_I": rep.m_I, "n": rep.n, "count2": rep.count2, "M": rep.M}
    text = [f"m_I(n-2) = {rep.m_I}*{rep.n - 2} = {rep.m_I * (rep.n - 2)} = 2*{rep.M} + {rep.count2}  holds"]
    return results, text


def cmd_classify(ctx):
    if ctx.args.size is None:
        raise UsageError("classify needs --size")
    pos = ctx.positions(minimum=3)
    names = ctx.names(pos)
    cls = classify_subsets(
        ctx.dataset.curve, [ctx.section(p) for p in pos], ctx.args.size, labels=names, limit=ctx.args.limit
    )
    classes = {str(pair): [list(s) for s in cls.classes[pair]] for pair in cls.distinct_pairs}
    results = {
        "size": ctx.args.size,
        "indices": names,
        "classes": classes,
        "excluded": {",".join(k): v for k, v in sorted(cls.excluded.items())},
    }
    text = [f"{pair}: {len(members)} subsets" for pair, members in classes.items()]
    text.append(f"excluded: {len(cls.excluded)} subsets")
    text.append(f"{len(classes)} distinct invariant pairs")
    return results, text


def _match_exact(ctx, found, k):
    """Pair each numeric line with the nearest dataset line (by embedded coordinates)."""
    exact = [(ln.name, elem_embed(ln.a, k), elem_embed(ln.b, k)) for ln in ctx.dataset.lines]
    matches = {}
    for idx, ln in enumerate(found):
        name, ea, eb = min(exact, key=lambda e: abs(e[1] - ln.a) + abs(e[2] - ln.b))
        matches[idx] = (name, max(abs(ea - ln.a), abs(eb - ln.b)))
    return matches


def cmd_find_bitangents(ctx):
    a = ctx.args
    k = a.embedding
    found = oracle.find_bitangents_numeric(ctx.dataset.curve, k=k, seeds=a.seeds, rng_seed=a.rng_seed, expected=a.expected)
    matches = _match_exact(ctx, found, k) if ctx.dataset.lines else {}
    lines, text = [], [f"found {len(found)} lines (seeds={a.seeds}, embedding k={k})"]
    for idx, ln in enumerate(found):
        entry = {"a": [ln.a.real, ln.a.imag], "b": [ln.b.real, ln.b.imag], "residual": ln.residual}
        row = f"a = {_fmt_complex(ln.a)}  b = {_fmt_complex(ln.b)}  residual {ln.residual:.1e}"
        if idx in matches:
            name, dist = matches[idx]
            entry["nearest"], entry["distance"] = name, dist
            row += f"  ~ {name} ({dist:.1e})"
        lines.append(entry)
        text.append(row)
    return {"count": len(found), "lines": lines}, text


def cmd_oracle_connected(ctx):
    pos = ctx.positions(default_all=False, minimum=2)
    lines = [ctx.dataset.lines[p] for p in pos]
    c = oracle.connected_number_numeric(
        ctx.dataset.curve, lines, k=ctx.args.embedding, tolerance=ctx.args.tolerance, precision=ctx.args.precision or 53
    )
    return {"indices": ctx.names(pos), "connected_number": c}, [f"c = {c}"]


HANDLERS = {
    "klein": cmd_klein,
    "verify": cmd_verify,
    "derive-sections": cmd_derive_sections,
    "gram": cmd_gram,
    "connected": cmd_connected,
    "invariants": cmd_invariants,
    "parity": cmd_parity,
    "classify": cmd_classify,
    "find-bitangents": cmd_find_bitangents,
    "oracle-connected": cmd_oracle_connected,
}


class _Failed(Exception):
    """A domain failure that still carries partial results for the report."""

    def __init__(self, error, results, text):
        super().__init__(str(error))
        self.error, self.results, self.text = error, results, text


def _emit(args, report, text, stream):
    structured = dumps_report(report)
    writes_dataset = args.command in ("klein", "derive-sections")
    if args.output and not writes_dataset:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(structured)
    if args.format == "structured":
        stream.write(structured)
    else:
        for line in text:
            print(line, file=stream)


def run(argv=None, stdout=None, stderr=None):
    """Run one command; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except SystemExit as exc:  # --help
        return exc.code or 0

    ctx = None
    try:
        ctx = _Context(args)
        out = HANDLERS[args.command](ctx)
        results, text = out[0], out[1]
        oracle_part = out[2] if len(out) > 2 else None
        report = make_report(args.command, argv, ctx.inputs(), results, oracle=oracle_part)
        _emit(args, report, text, stdout)
        return 0
    except _Failed as exc:
        report = make_report(args.command, argv, ctx.inputs(), exc.results, {"error": str(exc.error)})
        _emit(args, report, exc.text, stdout)
        print(f"error: {exc.error}", file=stderr)
        return 1
    except (DomainError, IdentityViolated) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        if ctx is not None and args.output and args.command not in ("klein", "derive-sections"):
            report = make_report(args.command, argv, ctx.inputs(), {}, {"error": f"{type(exc).__name__}: {exc}"})
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(dumps_report(report))
        return 1
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
