"""Command-line front end: exact spectra, certifications and plot data.

JSON-first output with CSV opt-in; every decimal is accompanied by its exact
source (surd record or enclosure width), and the effective configuration is
echoed in the output header so any run is reproducible from its output.

Exit codes: 0 success, 2 invalid input, 3 certification failed, 4 precision
exhausted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from . import __version__
from .cfrac import BiSeq, InvalidTermError, OneSidedSeq, compare_cf, convergents, eval_finite, parse_sequence
from .exact import (
    DomainError,
    PrecisionExhausted,
    exact_to_json,
    float_of,
    format_exact,
    precision_bits,
)
from .hall import (
    CertificationRefused,
    aperture_ratio,
    certify_hall_interval,
    f4_cantor,
    interval_solver,
    sum_record,
    ternary_cantor,
)
from .lattice import Lattice2D, canonicalize_point, indices_from_pivots, mono_canonical, pivots_of, reconstruct_biinfinite
from .mg2 import classify_low_spectrum, lower_part_table, mg2_hall_certify, perron_gap_search
from .perron import markov_spec, mordell_spec, tau_enumerate
from .apps import app1_spec, app1_spectrum_periodic, app2_hall_ray_certify, app2_kappa_plus, app2_spec
from .systole import l2_log_systole, log_systole, mordell_l2, profile_rows, spectrum_value_periodic


@dataclass
class RunConfig:
    command: str
    subcommand: str
    fmt: str = "json"
    seed: int = 0
    tol: str = "1e-9"
    depth: int = 20
    max_period: int = 4
    max_entry: int = 4
    step: float = 0.01
    t_range: str = "-3:3"
    precision_bits: int = 128
    extra: dict = field(default_factory=dict)


def _meta(cfg: RunConfig) -> dict:
    return {"tool": "latspec", "version": __version__, "config": asdict(cfg)}


def _value_payload(v) -> dict:
    out = {"exact": format_exact(v), "decimal": f"{float_of(v):.12f}", "record": exact_to_json(v)}
    return out


def _emit(cfg: RunConfig, result, out_stream, csv_rows=None, csv_header=None) -> None:
    if cfg.fmt == "csv" and csv_rows is not None:
        w = csv.writer(out_stream)
        if csv_header:
            w.writerow(csv_header)
        w.writerows(csv_rows)
        return
    json.dump({"meta": _meta(cfg), "result": result}, out_stream, ensure_ascii=False, indent=2, default=str)
    out_stream.write("\n")


def _parse_terms(s: str):
    return [int(x) for x in s.replace(",", " ").split()]


def _load_seq(s: str):
    obj = json.loads(s)
    return parse_sequence(obj)


def _as_biseq(seq) -> BiSeq:
    if isinstance(seq, BiSeq):
        return seq
    if isinstance(seq, OneSidedSeq):
        if seq.period and not seq.head:
            return BiSeq.from_period(seq.period)
        return BiSeq.from_one_sided(seq)
    raise DomainError("expected a sequence")


def _load_lattice(args) -> Lattice2D:
    if getattr(args, "lattice", None):
        return Lattice2D.from_json(json.loads(args.lattice))
    if getattr(args, "seq", None):
        seq = _as_biseq(_load_seq(args.seq))
        lat, _ = reconstruct_biinfinite(seq, getattr(args, "depth", 20))
        return lat
    raise DomainError("need --lattice or --seq")


def _t_range(spec: str):
    a, b = spec.split(":")
    return float(a), float(b)


SPEC_KINDS = {"L": "Lagrange", "M": "Markov", "D": "Dirichlet", "MG2": "MG2"}


def _cmd_cf(args, cfg, out):
    if args.action == "eval":
        val = eval_finite(_parse_terms(args.terms))
        _emit(cfg, _value_payload(val), out)
    elif args.action == "convergents":
        seq = _load_seq(args.seq)
        vals = convergents(seq, args.n)
        _emit(
            cfg,
            [{"k": i + 1, "value": exact_to_json(v)} for i, v in enumerate(vals)],
            out,
            csv_rows=[(i + 1, v.numerator, v.denominator) for i, v in enumerate(vals)],
            csv_header=("k", "p", "q"),
        )
    elif args.action == "compare":
        a, b = _load_seq(args.seq), _load_seq(args.seq2)
        c = compare_cf(a, b)
        _emit(cfg, {"order": {-1: "less", 0: "equal", 1: "greater"}[c]}, out)


def _cmd_lattice(args, cfg, out):
    if args.action == "reconstruct":
        seq = _as_biseq(_load_seq(args.seq))
        lat, chain = reconstruct_biinfinite(seq, args.depth)
        _emit(
            cfg,
            {
                "lattice": lat.as_json(),
                "pivots": [[str(p[0]), str(p[1])] for p in chain.pivots],
                "indices": chain.indices,
            },
            out,
        )
    elif args.action == "pivots":
        lat = _load_lattice(args)
        chain = pivots_of(lat, Fraction(args.y_max))
        rows = [(float_of(p[0]), float_of(p[1])) for p in chain.pivots]
        _emit(
            cfg,
            {"pivots": [[str(p[0]), str(p[1])] for p in chain.pivots], "hit_x_axis": chain.hit_x_axis, "hit_y_axis": chain.hit_y_axis},
            out,
            csv_rows=rows,
            csv_header=("x", "y"),
        )
    elif args.action == "indices":
        lat = _load_lattice(args)
        chain = pivots_of(lat, Fraction(args.y_max))
        got = indices_from_pivots(chain)
        _emit(cfg, got.as_json(), out)
    elif args.action == "canonicalize":
        if args.point:
            x, y = args.point.split(",")
            g = canonicalize_point((Fraction(x), Fraction(y)))
            _emit(cfg, {"x_sign": g.x_sign, "y_sign": g.y_sign, "t": g.t, "e2t": exact_to_json(g.e2t)}, out)
        else:
            g, alpha = mono_canonical(_load_lattice(args))
            _emit(cfg, {"t": g.t, "e2t": exact_to_json(g.e2t), "alpha": _value_payload(alpha)}, out)


def _cmd_systole(args, cfg, out):
    lat = _load_lattice(args)
    if args.action == "value":
        _emit(cfg, {"t": args.t, "W": log_systole(lat, args.t)}, out)
    elif args.action == "l2":
        if args.kappa2:
            lo, hi = _t_range(args.t_range)
            res = mordell_l2(lat, (lo, hi), args.step)
            payload = {"lower": res.lower, "upper": res.upper, "boundary_flag": res.boundary_flag}
            if res.fourth_power is not None:
                payload["kappa2_fourth_power"] = exact_to_json(res.fourth_power)
                payload["kappa2"] = res.value
            _emit(cfg, payload, out)
        else:
            _emit(cfg, {"t": args.t, "W2": l2_log_systole(lat, args.t)}, out)
    elif args.action == "plot":
        lo, hi = _t_range(args.t_range)
        rows = profile_rows(lat, lo, hi, args.step)
        _emit(
            cfg,
            [{"t": t, "W": w, "W2": w2} for (t, w, w2) in rows],
            out,
            csv_rows=[(f"{t:.6f}", f"{w:.12f}", f"{w2:.12f}") for (t, w, w2) in rows],
            csv_header=("t", "W", "W2"),
        )


def _cmd_spectrum(args, cfg, out):
    seq = _as_biseq(_load_seq(args.seq)) if args.seq else None
    if args.action == "value":
        if args.kind in SPEC_KINDS:
            got = spectrum_value_periodic(seq, SPEC_KINDS[args.kind])
            payload = _value_payload(got.value)
            payload["offset"] = got.offset
        elif args.kind == "MG2plus":
            payload = _value_payload(app2_kappa_plus(seq))
        elif args.kind in ("Sm", "Im"):
            limit = "sup" if args.kind == "Sm" else "inf"
            payload = _value_payload(app1_spectrum_periodic(args.m, seq, limit))
        else:
            raise DomainError(f"unknown kind {args.kind!r}")
        _emit(cfg, payload, out)
    elif args.action == "tau":
        parity = None
        if args.kind in ("L", "M"):
            spec, limit = markov_spec(), "sup"
        elif args.kind in ("D", "MG2"):
            spec, limit = mordell_spec(), "sup"
        elif args.kind == "MG2plus":
            spec, limit, parity = app2_spec(), "sup", 0
        elif args.kind == "Sm":
            spec, limit = app1_spec(args.m), "sup"
        elif args.kind == "Im":
            spec, limit = app1_spec(args.m), "inf"
        else:
            raise DomainError(f"unknown kind {args.kind!r}")
        if args.limit:
            limit = args.limit
        ts = tau_enumerate(spec, limit, args.max_period, args.max_entry, offset_parity=parity)
        _emit(
            cfg,
            {"partial": ts.partial, "values": [e.as_json() for e in ts.entries]},
            out,
            csv_rows=[(format_exact(e.value), float_of(e.value), " ".join(map(str, e.witness_period))) for e in ts.entries],
            csv_header=("exact", "decimal", "witness"),
        )


def _cmd_mg2(args, cfg, out):
    if args.action == "lower-part":
        rows = lower_part_table(args.t_max)
        _emit(
            cfg,
            [{"label": r.label, "exact": format_exact(r.value), "decimal": f"{r.decimal:.12f}"} for r in rows],
            out,
            csv_rows=[r.as_csv() for r in rows],
            csv_header=("label", "exact", "decimal"),
        )
    elif args.action == "classify":
        rep = classify_low_spectrum(args.max_period, args.max_entry)
        _emit(
            cfg,
            {
                "checked": rep.checked,
                "consistent": rep.consistent,
                "below": [{"period": list(p), "value": format_exact(v)} for p, v in rep.below],
                "violations": [list(p) for p in rep.violations],
            },
            out,
        )
        if not rep.consistent:
            raise CertificationRefused("lower-part classification violated")
    elif args.action == "gap-search":
        rep = perron_gap_search(args.max_period, args.max_entry)
        _emit(
            cfg,
            {
                "checked": rep.checked,
                "empty_interior": rep.empty_interior,
                "inside": [{"period": list(p), "value": format_exact(v)} for p, v in rep.inside],
                "left_witnesses": [list(p) for p in rep.left_witnesses],
                "right_witnesses": [list(p) for p in rep.right_witnesses],
            },
            out,
        )
        if not rep.empty_interior:
            raise CertificationRefused("a periodic Markov value fell inside the gap")
    elif args.action == "hall-certify":
        wit = mg2_hall_certify(Fraction(args.target), Fraction(args.tol))
        _emit(cfg, wit.as_json(), out)


def _make_set(name: str):
    if name == "ternary":
        return ternary_cantor()
    if name == "f4":
        return f4_cantor()
    raise DomainError(f"unknown cantor set {name!r}")


def _cmd_hall(args, cfg, out):
    if args.action == "aperture":
        cs = _make_set(args.set)
        sup = aperture_ratio(cs, args.depth)
        _emit(cfg, {"set": args.set, "depth": args.depth, "supremum": _value_payload(sup)}, out)
    elif args.action == "solve":
        cs = _make_set(args.set)
        wit = interval_solver(sum_record(), cs, cs, Fraction(args.h), Fraction(args.tol), min_level=args.depth)
        _emit(cfg, wit.as_json(), out)
    elif args.action == "certify":
        cs = _make_set(args.set)
        rep = certify_hall_interval(sum_record(), cs, cs, grid=args.grid, tol=Fraction(args.tol))
        _emit(cfg, rep.as_json(), out)
    elif args.action == "ray":
        target = math.inf if args.target in ("inf", "oo") else Fraction(args.target)
        wit = app2_hall_ray_certify(target, Fraction(args.tol))
        _emit(cfg, wit.as_json(), out)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latspec", description=__doc__)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    sub = p.add_subparsers(dest="command", required=True)

    cf = sub.add_parser("cf")
    cf.add_argument("action", choices=("eval", "convergents", "compare"))
    cf.add_argument("--terms", default="")
    cf.add_argument("--seq", default=None)
    cf.add_argument("--seq2", default=None)
    cf.add_argument("--n", type=int, default=10)

    lat = sub.add_parser("lattice")
    lat.add_argument("action", choices=("pivots", "indices", "reconstruct", "canonicalize"))
    lat.add_argument("--lattice", default=None)
    lat.add_argument("--seq", default=None)
    lat.add_argument("--depth", type=int, default=20)
    lat.add_argument("--y-max", dest="y_max", default="10")
    lat.add_argument("--point", default=None)

    sy = sub.add_parser("systole")
    sy.add_argument("action", choices=("value", "l2", "plot"))
    sy.add_argument("--lattice", default=None)
    sy.add_argument("--seq", default=None)
    sy.add_argument("--depth", type=int, default=30)
    sy.add_argument("--t", type=float, default=0.0)
    sy.add_argument("--t-range", dest="t_range", default="-3:3")
    sy.add_argument("--step", type=float, default=0.01)
    sy.add_argument("--kappa2", action="store_true")

    sp = sub.add_parser("spectrum")
    sp.add_argument("action", choices=("value", "tau"))
    sp.add_argument("--kind", required=True, choices=("L", "M", "D", "MG2", "MG2plus", "Sm", "Im"))
    sp.add_argument("--seq", default=None)
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--max-period", dest="max_period", type=int, default=4)
    sp.add_argument("--max-entry", dest="max_entry", type=int, default=4)
    sp.add_argument("--limit", choices=("inf", "sup"), default=None)

    mg = sub.add_parser("mg2")
    mg.add_argument("action", choices=("lower-part", "classify", "gap-search", "hall-certify"))
    mg.add_argument("--t-max", dest="t_max", type=int, default=3)
    mg.add_argument("--max-period", dest="max_period", type=int, default=5)
    mg.add_argument("--max-entry", dest="max_entry", type=int, default=3)
    mg.add_argument("--target", default="0.97")
    mg.add_argument("--tol", default="1e-9")

    ha = sub.add_parser("hall")
    ha.add_argument("action", choices=("aperture", "solve", "certify", "ray"))
    ha.add_argument("--set", default="ternary")
    ha.add_argument("--depth", type=int, default=12)
    ha.add_argument("--h", default="1")
    ha.add_argument("--grid", type=int, default=8)
    ha.add_argument("--tol", default="1e-9")
    ha.add_argument("--target", default="12")

    return p


_DISPATCH = {
    "cf": _cmd_cf,
    "lattice": _cmd_lattice,
    "systole": _cmd_systole,
    "spectrum": _cmd_spectrum,
    "mg2": _cmd_mg2,
    "hall": _cmd_hall,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    cfg = RunConfig(
        command=args.command,
        subcommand=getattr(args, "action", ""),
        fmt=args.format,
        seed=args.seed,
        precision_bits=precision_bits(),
        extra={k: v for k, v in vars(args).items() if k not in ("command", "action", "format", "seed", "out") and v is not None},
    )
    stream = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        _DISPATCH[args.command](args, cfg, stream)
        return 0
    except (DomainError, InvalidTermError, ValueError, KeyError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CertificationRefused as e:
        print(f"certification failed: {e}", file=sys.stderr)
        return 3
    except PrecisionExhausted as e:
        print(f"precision exhausted: {e}", file=sys.stderr)
        return 4
    finally:
        if args.out:
            stream.close()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
