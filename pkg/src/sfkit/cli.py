"""Command-line front end: evaluate functions, run identity checks, run sweeps.

Exit codes: 0 all requested checks passed, 1 at least one numerical failure,
2 invalid input (unknown id/function, malformed arguments).
"""
from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys

from . import __version__
from . import identities as ids
from . import limits
from .elliptic import EllipticBase, elliptic_gamma
from .gamma_core import (
    dedekind_eta,
    euler_gamma,
    field_gamma,
    pochhammer,
    q_gamma,
    q_pochhammer_inf,
)
from .hyperbolic import ModularPair, bernoulli_b22, gamma2, gamma_h
from .numerics import MBSpec

CSV_HEADER = "identity,seed,lhs_re,lhs_im,rhs_re,rhs_im,rel_residual,n_used,y_used,elapsed_ms,pass"


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' / 'a-bi' (i or j, optional whitespace) or a bare real."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty complex literal")
    t = t.replace("I", "i").replace("J", "i").replace("j", "i")
    if "i" not in t:
        return complex(float(t), 0.0)
    body = t[:-1] if t.endswith("i") else None
    if body is None:
        raise ValueError(f"malformed complex literal {text!r}")
    # split into real and imaginary pieces at the last +/- not part of an exponent
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            re_part, im_part = body[:k], body[k:]
            break
    else:
        re_part, im_part = "", body
    if im_part in ("", "+"):
        im = 1.0
    elif im_part == "-":
        im = -1.0
    else:
        im = float(im_part)
    return complex(float(re_part) if re_part else 0.0, im)


def format_complex(v: complex) -> str:
    return f"{repr(float(v.real))} {repr(float(v.imag))}"


# name -> (argument names, evaluator over parsed kwargs)
FUNCTIONS = {
    "euler_gamma": (("z",), lambda a: euler_gamma(a["z"])),
    "pochhammer": (("a", "n"), lambda a: pochhammer(a["a"], int(a["n"].real))),
    "field_gamma": (("x", "n"), lambda a: field_gamma(a["x"], int(a["n"].real))),
    "q_pochhammer": (("z", "q"), lambda a: q_pochhammer_inf(a["z"], a["q"])),
    "q_gamma": (("x", "q"), lambda a: q_gamma(a["x"], a["q"])),
    "eta": (("tau",), lambda a: dedekind_eta(a["tau"])),
    "elliptic_gamma": (("z", "p", "q"),
                       lambda a: elliptic_gamma(a["z"], EllipticBase(a["p"], a["q"]))),
    "gamma_h": (("u", "w1", "w2"),
                lambda a: gamma_h(a["u"], ModularPair(a["w1"], a["w2"]))),
    "gamma2": (("u", "w1", "w2"),
               lambda a: gamma2(a["u"], ModularPair(a["w1"], a["w2"]))),
    "b22": (("u", "w1", "w2"),
            lambda a: bernoulli_b22(a["u"], ModularPair(a["w1"], a["w2"]))),
}

SWEEPS = ("b_to_i", "b_to_1", "eta_ratio", "elliptic_to_hyperbolic")


def _parse_kv(pairs):
    out = {}
    for kv in pairs:
        if "=" not in kv:
            raise ValueError(f"expected key=value, got {kv!r}")
        k, v = kv.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def cmd_eval(args) -> int:
    name = args.function
    if name not in FUNCTIONS:
        print(f"unknown function {name!r}; known: {', '.join(sorted(FUNCTIONS))}",
              file=sys.stderr)
        return 2
    argnames, fn = FUNCTIONS[name]
    try:
        kv = _parse_kv(args.args)
        vals = {k: parse_complex(v) for k, v in kv.items()}
        missing = [a for a in argnames if a not in vals]
        if missing:
            raise ValueError(f"missing arguments: {missing}")
        result = fn(vals)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(format_complex(complex(result)))
    return 0


def _parse_seeds(text: str):
    seeds = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            a, b = part.split("..", 1)
            seeds.extend(range(int(a), int(b) + 1))
        elif part:
            seeds.append(int(part))
    if not seeds:
        raise ValueError("empty seed list")
    return seeds


def _run_one(job):
    ident, seed, n_max, y_max, tol = job
    spec = None
    if n_max is not None or y_max is not None:
        spec = MBSpec(n_max=n_max if n_max is not None
                      else ids.REGISTRY[ident].n_max_default,
                      y_max=y_max if y_max is not None else 200.0)
    rep = ids.evaluate_identity(ident, spec=spec, seed=seed, tolerance=tol)
    row = rep.row(seed)
    row["parameters"] = rep.params_payload()
    return ident, seed, row


def _emit_csv(rows, out):
    # the CSV schema is fixed and carries no parameter column
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            r["identity"], str(r["seed"]),
            repr(float(r["lhs_re"])), repr(float(r["lhs_im"])),
            repr(float(r["rhs_re"])), repr(float(r["rhs_im"])),
            repr(float(r["rel_residual"])),
            str(r["n_used"]), repr(float(r["y_used"])),
            str(r["elapsed_ms"]),
            "true" if r["pass"] else "false",
        ]))
    out.write("\n".join(lines) + "\n")


def _emit_json(rows, config, out):
    doc = {
        "version": __version__,
        "config": config,
        "registry_hash": ids.registry_hash(),
        "records": rows,
    }
    json.dump(doc, out, indent=1, sort_keys=True)
    out.write("\n")


def _read_config_file(path):
    opts = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            k, v = line.split("=", 1)
            opts[k.strip()] = v.strip()
    return opts


def cmd_check(args) -> int:
    try:
        if args.config:
            for k, v in _read_config_file(args.config).items():
                if getattr(args, k, None) is None:
                    setattr(args, k, v)
        wanted = args.id if args.id is not None else "all"
        if args.seeds is None:
            args.seeds = "1"
        if args.format is None:
            args.format = "json"
        known = ids.list_identities()
        idents = known if wanted == "all" else [s.strip() for s in wanted.split(",")]
        for ident in idents:
            if ident not in known:
                print(f"unknown identity {ident!r}", file=sys.stderr)
                return 2
        seeds = _parse_seeds(args.seeds)
        n_max = int(args.n_max) if args.n_max is not None else None
        y_max = float(args.y_max) if args.y_max is not None else None
        tol = float(args.tol) if args.tol is not None else None
        jobs = int(args.jobs or os.environ.get("SFKIT_JOBS") or os.cpu_count() or 1)
    except (ValueError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2

    work = [(ident, seed, n_max, y_max, tol)
            for ident in idents for seed in seeds]
    results = {}
    if jobs > 1 and len(work) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            for ident, seed, row in pool.map(_run_one, work):
                results[(ident, seed)] = row
    else:
        for job in work:
            ident, seed, row = _run_one(job)
            results[(ident, seed)] = row
    rows = [results[k] for k in sorted(results)]

    config = {"id": wanted, "seeds": args.seeds, "n_max": n_max, "y_max": y_max,
              "tol": tol, "format": args.format}
    sink = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.format == "csv":
            _emit_csv(rows, sink)
        else:
            _emit_json(rows, config, sink)
    finally:
        if args.out:
            sink.close()
    return 0 if all(r["pass"] for r in rows) else 1


def cmd_sweep(args) -> int:
    name = args.limit
    if name not in SWEEPS:
        print(f"unknown limit {name!r}; known: {', '.join(SWEEPS)}", file=sys.stderr)
        return 2
    try:
        kv = _parse_kv(args.args)
        if "deltas" in kv:
            deltas = tuple(float(x) for x in kv.pop("deltas").split(";"))
        else:
            deltas = limits.DEFAULT_VS if name == "elliptic_to_hyperbolic" \
                else limits.DEFAULT_DELTAS
        if name == "b_to_i":
            sweep = limits.limit_b_to_i(int(float(kv["n"])),
                                        parse_complex(kv["x"]), deltas)
        elif name == "b_to_1":
            sweep = limits.limit_b_to_1(int(float(kv["n"])),
                                        parse_complex(kv["y"]), deltas)
        elif name == "eta_ratio":
            sweep = limits.eta_ratio_limit(deltas, mode=kv.get("mode", "b_to_i"))
        else:
            mp = ModularPair(parse_complex(kv.get("w1", "1")),
                             parse_complex(kv.get("w2", "1.3")))
            sweep = limits.elliptic_to_hyperbolic_ratio(
                parse_complex(kv["u"]), mp, deltas)
    except (KeyError, ValueError) as exc:
        print(f"invalid sweep arguments: {exc}", file=sys.stderr)
        return 2
    sink = open(args.out, "w") if args.out else sys.stdout
    try:
        sink.write("delta,ratio_re,ratio_im,abs_err\n")
        for d, r in sweep.observed():
            sink.write(f"{repr(float(d))},{repr(float(r.real))},"
                       f"{repr(float(r.imag))},{repr(abs(r - 1))}\n")
        sink.write(f"# fitted_order = {repr(float(sweep.fitted_order))}\n")
    finally:
        if args.out:
            sink.close()
    return 0


def cmd_list(args) -> int:
    for ident in ids.list_identities():
        d = ids.REGISTRY[ident]
        print(f"{ident:28s} {d.kind:18s} tol={d.tolerance:g}  {d.description}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sfkit",
                                 description="gamma hierarchy identity checker")
    sub = ap.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a special function")
    p_eval.add_argument("function")
    p_eval.add_argument("args", nargs="*", help="key=value arguments")

    p_check = sub.add_parser("check", help="verify identities")
    p_check.add_argument("--id", default=None,
                         help="comma-separated identity ids or 'all'")
    p_check.add_argument("--seeds", default=None, help="e.g. 1,2,3 or 1..5")
    p_check.add_argument("--tol", default=None, help="tolerance override")
    p_check.add_argument("--n-max", dest="n_max", default=None,
                         help="bilateral truncation override")
    p_check.add_argument("--y-max", dest="y_max", default=None,
                         help="line truncation override")
    p_check.add_argument("--format", choices=("json", "csv"), default=None)
    p_check.add_argument("--out", default=None)
    p_check.add_argument("--jobs", default=None)
    p_check.add_argument("--config", default=None,
                         help="key=value file mirroring the flags")

    p_sweep = sub.add_parser("sweep", help="run a degeneration sweep")
    p_sweep.add_argument("limit", help="|".join(SWEEPS))
    p_sweep.add_argument("args", nargs="*", help="key=value arguments")
    p_sweep.add_argument("--out", default=None)

    sub.add_parser("list", help="list registered identities")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "eval":
        return cmd_eval(args)
    if args.command == "check":
        return cmd_check(args)
    if args.command == "sweep":
        return cmd_sweep(args)
    if args.command == "list":
        return cmd_list(args)
    return 2


if __name__ == "__main__":
    sys.exit(main())
