"""Command line front end.

Bit strings are read from stdin one per line and written one per line. Trace
positions in JSON output are 0-indexed. Exit status: 0 success, 1 domain error
(failed decode, infeasible parameters), 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .bitseq import check_bits

TABLE_SCHEMA = 1
PRECISION_ENV = "CTXDEL_PRECISION"


class DomainError(Exception):
    pass


def _lines(stream) -> list[str]:
    out = []
    for raw in stream:
        s = raw.strip()
        if s:
            out.append(check_bits(s))
    return out


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _ceps_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--rmax", type=int)
    p.add_argument("--lmax", type=int)


def _ceps_params(a, default):
    from .constrained import CepsParams

    fields = ("n", "k", "l", "w", "rmax", "lmax")
    given = {f: getattr(a, f) for f in fields if getattr(a, f, None) is not None}
    if not given:
        return default
    if default is not None:
        base = {f: getattr(default, f) for f in fields}
        base.update(given)
        given = base
    missing = [f for f in fields if f not in given]
    if missing:
        raise DomainError(f"missing parameters: {', '.join(missing)}")
    return CepsParams(**given)


# -- channel -------------------------------------------------------------------------


def cmd_channel(a, out) -> None:
    from .channel import ChannelParams, DeletionTrace, apply_extremal, contextual_positions, sample_channel

    for i, x in enumerate(_lines(sys.stdin)):
        if a.mode == "extremal":
            y = apply_extremal(x, a.k)
            trace = DeletionTrace("simultaneous", tuple(contextual_positions(x, a.k)))
        else:
            y, trace = sample_channel(x, ChannelParams(a.k, a.p), a.seed + i)
        out.write(y + "\n")
        if a.emit_trace:
            out.write(_dump(trace.to_json()) + "\n")


# -- codecs --------------------------------------------------------------------------


def _codec(a):
    if a.codec == "general":
        from .codec_t import GENERAL_DESK, GeneralCodec, SkParams

        d = GENERAL_DESK
        p = SkParams(n=a.n or d.n, k=a.k or d.k, t=a.t or d.t, imax=a.imax or d.imax)
        return GeneralCodec(p, seed=a.seed), p.n
    from .codec_vt import DOUBLE_DESK, SINGLE_DESK, DoubleCodec, SingleCodec

    if a.codec == "single":
        c = SingleCodec(_ceps_params(a, SINGLE_DESK))
    else:
        c = DoubleCodec(_ceps_params(a, DOUBLE_DESK))
    return c, c.msg_bits


def _codec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--codec", choices=["single", "double", "general"], required=True)
    _ceps_args(p)
    p.add_argument("--t", type=int, help="deletions corrected (general codec)")
    p.add_argument("--imax", type=int, help="cluster size cap (general codec)")
    p.add_argument("--seed", type=int, default=0, help="mask search seed (general codec)")
    p.add_argument("--report-redundancy", action="store_true")


def _report(c, msg_bits, out) -> None:
    out.write(_dump({"length": c.length, "message_bits": msg_bits, "redundancy": c.length - msg_bits}) + "\n")


def cmd_encode(a, out) -> None:
    c, msg_bits = _codec(a)
    for m in _lines(sys.stdin):
        out.write(c.encode(m) + "\n")
    if a.report_redundancy:
        _report(c, msg_bits, out)


def cmd_decode(a, out) -> None:
    c, msg_bits = _codec(a)
    for y in _lines(sys.stdin):
        out.write(c.decode(y) + "\n")
    if a.report_redundancy:
        _report(c, msg_bits, out)


# -- constrained sets ---------------------------------------------------------------------


def cmd_enumerate(a, out) -> None:
    from .capacity import PATTERN_SETS, transfer_matrix_count

    if a.patterns:
        P = [check_bits(s) for s in a.patterns.split(",") if s]
    else:
        if a.k is None:
            raise DomainError("--set needs --k")
        P = PATTERN_SETS[{"RLL": "rll"}.get(a.set, a.set)](a.k)
    out.write("n\tcount\n")
    for n in range(a.n_max + 1):
        out.write(f"{n}\t{transfer_matrix_count(P, n)}\n")


def _enumerator(a):
    from .constrained import Enumerator, build_dfa_Ceps, build_dfa_Ceps_prime

    p = _ceps_params(a, None)
    if p is None:
        raise DomainError("give --n --k --l --w --rmax --lmax")
    if a.preset == "ceps":
        dfa = build_dfa_Ceps(p)
    else:
        dfa = build_dfa_Ceps_prime(p, a.d_window if a.d_window is not None else p.w)
    e = Enumerator(dfa, p.n)
    if e.capacity_bits < 1:
        raise DomainError("infeasible: the constrained set has fewer than 2 words")
    return e


def cmd_constrained_encode(a, out) -> None:
    e = _enumerator(a)
    for m in _lines(sys.stdin):
        out.write(e.encode_bits(m) + "\n")


def cmd_constrained_decode(a, out) -> None:
    e = _enumerator(a)
    for x in _lines(sys.stdin):
        out.write(e.decode_bits(x) + "\n")


# -- capacity and the extremal channel ---------------------------------------------------


def cmd_capacity(a, out) -> None:
    from .capacity import _fixed, capacity_bounds, coeffs

    which = ("rll", "baseline", "xi", "nu") if a.bounds == "all" else (a.bounds,)
    rows = []
    for k in range(a.k_min, a.k_max + 1):
        res = capacity_bounds(k, a.precision, which)
        rows.append((k, res))
    if a.format == "json":
        out.write(
            _dump(
                [
                    {
                        "k": k,
                        **{
                            w: {"log2_rho": _fixed(r.log2_rho, 7), "rho": _fixed(r.rho, 7), "denominator": coeffs(r.denominator)}
                            for w, r in res.items()
                        },
                    }
                    for k, res in rows
                ]
            )
            + "\n"
        )
        return
    names = {"rll": "rll", "baseline": "baseline", "xi": "log_xi", "nu": "log_nu"}
    out.write("\t".join(["k"] + [names[w] for w in which] + [f"den_{w}" for w in which]) + "\n")
    for k, res in rows:
        vals = [_fixed(res[w].log2_rho, 7) for w in which]
        dens = [json.dumps(coeffs(res[w].denominator)) for w in which]
        out.write("\t".join([str(k)] + vals + dens) + "\n")


def cmd_extremal_encode(a, out) -> None:
    from .capacity import ExtremalCode

    c = ExtremalCode(a.n, a.k)
    for m in _lines(sys.stdin):
        out.write(c.encode(m) + "\n")


def cmd_extremal_decode(a, out) -> None:
    from .capacity import ExtremalCode

    c = ExtremalCode(a.n, a.k)
    for y in _lines(sys.stdin):
        out.write(c.decode(y) + "\n")


# -- oracle ------------------------------------------------------------------------------


def cmd_verify(a, out) -> None:
    from .oracle import CodeBook, verify_code

    with open(a.codefile) as fh:
        words = _lines(fh)
    if not words:
        raise DomainError("empty code file")
    v = verify_code(CodeBook.of(words, a.k, a.t), a.mode)
    out.write(_dump({"ok": v.ok, "size": len(set(words)), "witness": list(v.witness) if v.witness else None}) + "\n")


def cmd_bounds(a, out) -> None:
    from .oracle import bounds_report

    out.write(_dump(bounds_report(a.n, a.t, C=a.C, k=a.k).to_json()) + "\n")


# -- parser ------------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(_dump({"error": "usage", "message": message, "prog": self.prog}) + "\n")
        self.exit(2)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ctxdel", description="Contextual deletion channels and codes.")
    ap.add_argument("--version", action="version", version=f"ctxdel {__version__} (table schema {TABLE_SCHEMA})")
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("channel", help="pass words from stdin through the channel")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["extremal", "sample"], default="sample")
    p.add_argument("--emit-trace", action="store_true")
    p.set_defaults(fn=cmd_channel)

    for name, fn in (("encode", cmd_encode), ("decode", cmd_decode)):
        p = sub.add_parser(name, help=f"{name} with a contextual deletion code")
        _codec_args(p)
        p.set_defaults(fn=fn)

    p = sub.add_parser("enumerate", help="count pattern-avoiding words")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--patterns")
    g.add_argument("--set", choices=["H", "J", "RLL", "baseline"])
    p.add_argument("--k", type=int)
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(fn=cmd_enumerate)

    for name, fn in (("constrained-encode", cmd_constrained_encode), ("constrained-decode", cmd_constrained_decode)):
        p = sub.add_parser(name, help="rank/unrank into C_eps or C'_eps")
        p.add_argument("--preset", choices=["ceps", "ceps-prime"], required=True)
        _ceps_args(p)
        p.add_argument("--d-window", type=int)
        p.set_defaults(fn=fn)

    p = sub.add_parser("capacity", help="capacity bounds table")
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--bounds", choices=["rll", "baseline", "xi", "nu", "all"], default="all")
    p.add_argument("--precision", type=int, default=int(os.environ.get(PRECISION_ENV, "30")))
    p.add_argument("--format", choices=["tsv", "json"], default="tsv")
    p.set_defaults(fn=cmd_capacity)

    for name, fn in (("extremal-encode", cmd_extremal_encode), ("extremal-decode", cmd_extremal_decode)):
        p = sub.add_parser(name, help="zero-error code for the extremal channel")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--k", type=int, required=True)
        p.set_defaults(fn=fn)

    p = sub.add_parser("verify", help="brute-force check of a code file")
    p.add_argument("--codefile", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--mode", choices=["sequential", "simultaneous"], default="sequential")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("bounds", help="leading terms of the redundancy bounds")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--C", type=float)
    g.add_argument("--k", type=int)
    p.set_defaults(fn=cmd_bounds)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        a.fn(a, sys.stdout)
    except (DomainError, ValueError, OSError) as e:
        sys.stderr.write(_dump({"error": type(e).__name__, "message": str(e)}) + "\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
