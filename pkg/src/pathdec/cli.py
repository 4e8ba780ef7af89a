"""Command-line entry point: ``pathdec <command> [flags]``.

Exit codes: 0 success, 1 verification FAIL, 2 decomposition stage failure,
3 internal verification mismatch, 64 usage error, 66 unreadable input.
"""

from __future__ import annotations

import argparse
import sys

from . import formats
from .decomposer import perfect_decompose, verify_decomposition
from .digraph import partition_by_excess, total_excess
from .errors import OracleCapExceeded
from .generator import classify, compute_parameters, gen_dnp, gen_example_class, p1_threshold
from .montecarlo import MONTECARLO_EDGE_CAP, run as run_montecarlo
from .oracle import DEFAULT_EDGE_CAP, brute_force_pn

EX_USAGE, EX_NOINPUT = 64, 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EX_USAGE)


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="pathdec", description="Perfect path decompositions of dense digraphs.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a random digraph as an edge list")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=float)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--class", dest="cls", choices=["dnp", "example"], default="dnp")
    g.add_argument("--t", type=int, help="bipartite degree (example class)")
    g.add_argument("--euler-deg", type=int, default=0, help="Eulerian degree cap (example class)")
    g.add_argument("--out", default="-")

    def param_flags(q):
        q.add_argument("--kappa", type=float)
        q.add_argument("--lambda", dest="lam", type=float)
        q.add_argument("--cprime", type=float, default=1.0)
        q.add_argument("--p", type=float, help="edge probability (default: observed density)")
        q.add_argument("--threshold", type=int, help="|excess| threshold for A+ / A-")

    c = sub.add_parser("classify", help="report class properties P1-P5")
    c.add_argument("--in", dest="inp", required=True)
    param_flags(c)
    c.add_argument("--pseudorandom", action="store_true", help="use the pseudorandom parameter formulas")
    c.add_argument("--p5-samples", type=int)
    c.add_argument("--seed", type=int, default=0)

    d = sub.add_parser("decompose", help="compute a perfect path decomposition")
    d.add_argument("--in", dest="inp", required=True)
    d.add_argument("--out", default="-")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--mode", choices=["strict", "permissive"], default="strict")
    param_flags(d)
    d.add_argument("--trace", help="write absorption trace lines to this file")

    v = sub.add_parser("verify", help="check a decomposition file against a digraph")
    v.add_argument("--graph", required=True)
    v.add_argument("--paths", required=True)

    mc = sub.add_parser("montecarlo", help="estimate the consistent fraction of D(n,p)")
    mc.add_argument("--n-list", type=_int_list, required=True)
    mc.add_argument("--p-list", type=_float_list, required=True)
    mc.add_argument("--trials", type=int, required=True)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--method", choices=["oracle", "constructive"], default="oracle")
    mc.add_argument("--edge-cap", type=int, default=MONTECARLO_EDGE_CAP)
    mc.add_argument("--out", default="-")

    o = sub.add_parser("pn", help="exact path number by exhaustive search")
    o.add_argument("--in", dest="inp", required=True)
    o.add_argument("--edge-cap", type=int, default=DEFAULT_EDGE_CAP)
    return ap


def _read_graph(path):
    try:
        if path == "-":
            return formats.parse_edge_list(sys.stdin.read())
        return formats.read_edge_list(path)
    except (OSError, UnicodeDecodeError, formats.FormatError) as exc:
        sys.stderr.write(f"pathdec: cannot read {path}: {exc}\n")
        raise SystemExit(EX_NOINPUT)


def _emit(text: str, dest: str) -> None:
    if dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def cmd_generate(a) -> int:
    if a.cls == "dnp":
        if a.p is None:
            raise UsageError("--p is required for --class dnp")
        try:
            D = gen_dnp(a.n, a.p, a.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        if a.t is None:
            raise UsageError("--t is required for --class example")
        try:
            D = gen_example_class(a.n, a.t, a.euler_deg, a.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    _emit(formats.format_edge_list(D), a.out)
    return 0


def _density(D, p):
    if p is not None:
        return p
    n = D.n
    return min(max(D.m / (n * (n - 1)), 1e-12), 1 - 1e-12) if n > 1 else 0.5


def cmd_classify(a) -> int:
    D = _read_graph(a.inp)
    try:
        params = compute_parameters(D.n, _density(D, a.p), "pseudorandom" if a.pseudorandom else "plain",
                                    c_prime=a.cprime, kappa=a.kappa, lam=a.lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    thr = a.threshold if a.threshold is not None else p1_threshold(params.kappa)
    part = partition_by_excess(D, thr)
    rep = classify(D, part, params, p5_samples=a.p5_samples, seed=a.seed)
    sys.stdout.write(f"n={D.n} m={D.m} p={params.p:.6g} kappa={params.kappa:.6g} lambda={params.lam:.6g} "
                     f"threshold={thr} |A+|={len(part.a_plus)} |A-|={len(part.a_minus)} "
                     f"|A0|={len(part.a_zero)}\n")
    sys.stdout.write(rep.text())
    return 0


def cmd_decompose(a) -> int:
    D = _read_graph(a.inp)
    res = perfect_decompose(D, seed=a.seed, mode=a.mode, threshold=a.threshold, kappa=a.kappa,
                            lam=a.lam, c_prime=a.cprime, p=a.p, trace=bool(a.trace))
    sys.stderr.write(res.report())
    if a.trace:
        _emit("".join(line + "\n" for line in res.trace), a.trace)
    if res.internal_error:
        return 3
    if not res.success:
        return 2
    _emit(formats.format_paths(res.decomposition.paths), a.out)
    return 0


def cmd_verify(a) -> int:
    D = _read_graph(a.graph)
    try:
        paths = formats.read_paths(a.paths)
    except (OSError, UnicodeDecodeError, formats.FormatError) as exc:
        sys.stderr.write(f"pathdec: cannot read {a.paths}: {exc}\n")
        raise SystemExit(EX_NOINPUT)
    rep = verify_decomposition(D, paths)
    if rep.ok:
        sys.stdout.write(f"PASS paths={len(paths)} excess={total_excess(D)}\n")
        return 0
    sys.stdout.write("FAIL\n" + "".join(f"  {p}\n" for p in rep.problems))
    return 1


def cmd_montecarlo(a) -> int:
    if a.trials < 1:
        raise UsageError("--trials must be positive")
    if any(not 0.0 <= p <= 1.0 for p in a.p_list):
        raise UsageError("every p must lie in [0, 1]")
    _emit(run_montecarlo(a.n_list, a.p_list, a.trials, a.seed, a.method, a.edge_cap), a.out)
    return 0


def cmd_pn(a) -> int:
    D = _read_graph(a.inp)
    try:
        pn = brute_force_pn(D, edge_cap=a.edge_cap)
    except OracleCapExceeded as exc:
        sys.stderr.write(f"pathdec: {exc}\n")
        return 2
    ex = total_excess(D)
    sys.stdout.write(f"pn={pn} excess={ex} consistent={'yes' if pn == ex else 'no'}\n")
    return 0


COMMANDS = {"generate": cmd_generate, "classify": cmd_classify, "decompose": cmd_decompose,
            "verify": cmd_verify, "montecarlo": cmd_montecarlo, "pn": cmd_pn}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"pathdec {args.command}: error: {exc}\n")
        return EX_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
