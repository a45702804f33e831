"""Command-line front end.

Subcommands:

  act        apply sigma / delta / delta^k / transfer / weight / norm
  beta       one (V, W) case: formula value, computed value, or both
  sweep      enumerate reduced-V cases, compare formula vs computation,
             write a JSON report (with a CSV mirror)
  decompose  split a covariant as h = N_j*h1 + h2 with h2 a transfer
             covariant (prints the parts and a transfer witness)

Exit codes: 0 success/agreement, 1 verified mismatch between formula and
computation, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import re
import sys
import time

from . import covariants, formulas, generators
from .modules import ModuleSpec, module_spec
from .parsing import ParseError, format_polynomial, parse_polynomial
from .poly import delta, delta_power, norm, transfer, weight


class UsageError(Exception):
    pass


def _blocks(text: str):
    try:
        sizes = [int(s) for s in text.split(",") if s.strip() != ""]
    except ValueError:
        raise UsageError(f"bad block list {text!r}: expected comma-separated integers")
    if not sizes:
        raise UsageError(f"bad block list {text!r}: empty")
    return sizes


def _vspec(p: int, blocks) -> ModuleSpec:
    try:
        return module_spec(p, blocks)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc))


# -- act ----------------------------------------------------------------


def cmd_act(args) -> int:
    vspec = _vspec(args.p, _blocks(args.v))
    op = args.op.strip()
    try:
        f = parse_polynomial(args.expr, vspec)
    except ParseError as exc:
        raise UsageError(f"cannot parse expression: {exc}")
    m = re.fullmatch(r"norm\s+(\d+)", op)
    if m:
        j = int(m.group(1))
        if not 1 <= j <= vspec.num_blocks:
            raise UsageError(f"norm block index {j} out of range")
        print(format_polynomial(norm(vspec, j)))
        return 0
    m = re.fullmatch(r"delta\^(\d+)", op)
    if m:
        print(format_polynomial(delta_power(f, int(m.group(1)))))
        return 0
    if op == "sigma":
        from .poly import apply_sigma

        print(format_polynomial(apply_sigma(f)))
    elif op == "delta":
        print(format_polynomial(delta(f)))
    elif op == "transfer":
        print(format_polynomial(transfer(f)))
    elif op == "weight":
        print(weight(f))
    else:
        raise UsageError(
            f"unknown operator {op!r}; expected sigma, delta, delta^k, "
            "transfer, weight, or 'norm j'"
        )
    return 0


# -- beta and sweep -----------------------------------------------------


def _case_result(p, v_blocks, w_blocks, mode, cap_override=None):
    """One comparison entry of the report (beta/sweep share this)."""
    vspec = _vspec(p, v_blocks)
    wspec = _vspec(p, w_blocks)
    start = time.monotonic()
    entry = {
        "p": p,
        "v_blocks": list(v_blocks),
        "w_blocks": list(w_blocks),
        "status": "ok",
        "case_label": None,
        "beta_formula": None,
        "beta_computed": None,
        "generator_degrees": None,
        "cap_used": None,
        "cap_certificate": None,
        "agree": None,
        "elapsed_ms": None,
    }
    if mode in ("formula", "both"):
        value, label = formulas.beta_covariants_formula(vspec, wspec)
        entry["beta_formula"] = value
        entry["case_label"] = label
    if mode in ("compute", "both"):
        vred, _ = formulas.reduce_V(vspec)
        w_sizes = [n for n in wspec.blocks if n > 1]
        betas = []
        degs = None
        cap_used = None
        certificate = None
        # decomposable W: generators are the per-summand generators
        # (degree-0 generators of trivial summands included implicitly)
        for n in w_sizes or [1]:
            rep = generators.covariant_beta(
                vred, module_spec(p, [n]), cap_override=cap_override
            )
            betas.append(rep.beta)
            degs = rep.generator_degrees() if len(w_sizes) <= 1 else None
            cap_used = rep.cap_used
            certificate = rep.cap_certificate
            if not rep.certified:
                entry["status"] = "inconclusive: cap override below certified cap"
        entry["beta_computed"] = max(betas)
        entry["generator_degrees"] = degs
        entry["cap_used"] = cap_used
        entry["cap_certificate"] = certificate
    if mode == "both":
        entry["agree"] = entry["beta_formula"] == entry["beta_computed"]
    entry["elapsed_ms"] = int((time.monotonic() - start) * 1000)
    return entry


def cmd_beta(args) -> int:
    entry = _case_result(args.p, _blocks(args.v), _blocks(args.w), args.mode, args.cap)
    print(json.dumps(entry, indent=2))
    if args.mode == "both" and not entry["agree"]:
        return 1
    return 0


def _max_piece_dim(p, v_blocks):
    """Largest multidegree piece dimension the case can touch (at the
    certified cap), used for the prospective dimension budget."""
    vred = [n for n in v_blocks if n > 1]
    if not vred:
        return 1
    m = len(vred)
    dim = sum(vred)
    gamma_bound = formulas.coinvariant_top_degree_bound(
        module_spec(p, vred)
    )
    cap = max(p, m * p - dim, gamma_bound)
    best = 0
    for combo in itertools.product(*(range(cap + 1) for _ in range(m))):
        if sum(combo) != cap:
            continue
        size = 1
        for d, n in zip(combo, vred):
            size *= math.comb(d + n - 1, n - 1)
        best = max(best, size)
    return best


def cmd_sweep(args) -> int:
    p_list = [int(s) for s in args.p.split(",")]
    w_sizes = [int(s) for s in args.w.split(",")]
    cases = []
    for p in p_list:
        sizes = range(2, min(args.max_block_size, p) + 1)
        for nblocks in range(1, args.max_blocks + 1):
            for blocks in itertools.combinations_with_replacement(sizes, nblocks):
                for n in w_sizes:
                    if 1 <= n <= p:
                        cases.append((p, sorted(blocks, reverse=True), [n]))
    entries = []
    for p, v_blocks, w_blocks in cases:
        if args.max_piece_dim and _max_piece_dim(p, v_blocks) > args.max_piece_dim:
            entries.append(
                {
                    "p": p,
                    "v_blocks": v_blocks,
                    "w_blocks": w_blocks,
                    "status": "skipped: budget",
                    "case_label": None,
                    "beta_formula": None,
                    "beta_computed": None,
                    "generator_degrees": None,
                    "cap_used": None,
                    "cap_certificate": None,
                    "agree": None,
                    "elapsed_ms": None,
                }
            )
            continue
        entry = _case_result(p, v_blocks, w_blocks, "both", args.cap)
        if args.max_case_seconds and entry["elapsed_ms"] > args.max_case_seconds * 1000:
            entry["status"] = "over budget"
        entries.append(entry)
    report = {"cases": entries}
    fields = [
        "p", "v_blocks", "w_blocks", "status", "case_label", "beta_formula",
        "beta_computed", "generator_degrees", "cap_used", "cap_certificate",
        "agree", "elapsed_ms",
    ]
    try:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        csv_path = re.sub(r"\.json$", "", args.out) + ".csv"
        with open(csv_path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fields)
            writer.writeheader()
            for e in entries:
                row = dict(e)
                for key in ("v_blocks", "w_blocks", "generator_degrees"):
                    if row[key] is not None:
                        row[key] = " ".join(str(x) for x in row[key])
                writer.writerow(row)
    except OSError as exc:
        raise UsageError(f"cannot write report: {exc}")
    ran = [e for e in entries if e["agree"] is not None]
    print(f"{len(entries)} cases, {len(entries) - len(ran)} skipped, "
          f"{sum(1 for e in ran if e['agree'])} agree, "
          f"{sum(1 for e in ran if not e['agree'])} disagree")
    return 0 if all(e["agree"] for e in ran) else 1


# -- decompose ----------------------------------------------------------


def cmd_decompose(args) -> int:
    vspec = _vspec(args.p, _blocks(args.v))
    wspec = _vspec(args.p, _blocks(args.w))
    if wspec.num_blocks != 1:
        raise UsageError("W must be a single block")
    if args.file == "-":
        lines = sys.stdin.read().splitlines()
    else:
        try:
            with open(args.file) as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            raise UsageError(str(exc))
    n = wspec.blocks[0]
    if len(lines) > n:
        raise UsageError(f"covariant file has {len(lines)} lines but dim W = {n}")
    try:
        comps = [parse_polynomial(line, vspec) for line in lines]
    except ParseError as exc:
        raise UsageError(f"cannot parse component: {exc}")
    try:
        h = covariants.Covariant(vspec, wspec, comps)
    except covariants.ChainError as exc:
        raise UsageError(f"not a covariant: {exc}")
    if h.is_zero():
        raise UsageError("covariant is zero")
    j = args.j
    if not 1 <= j <= vspec.num_blocks:
        raise UsageError(f"block index {j} out of range")
    md = h.multidegree()
    if md[j - 1] <= vspec.p - vspec.blocks[j - 1]:
        raise UsageError(
            f"hypothesis d_j > p - n_j fails: multidegree {md}, "
            f"d_{j} = {md[j - 1]} <= {vspec.p - vspec.blocks[j - 1]}"
        )
    h1, h2, u = covariants.decompose_by_norm(h, j)
    check = h1.scale_by_invariant(norm(vspec, j)) + h2
    for name, obj in (("h1", h1), ("h2", h2)):
        for i, f in enumerate(obj.components, start=1):
            print(f"{name}[{i}] = {format_polynomial(f)}")
    print(f"witness u = {format_polynomial(u)}")
    print("reconstruction h = N_j*h1 + h2:", "ok" if check == h else "FAILED")
    return 0 if check == h else 1


# -- entry point --------------------------------------------------------


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="modcov",
        description="Invariants and covariants of Z/p in characteristic p",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("act", help="apply an operator to a polynomial")
    a.add_argument("--p", type=int, required=True)
    a.add_argument("--v", required=True, help="V block sizes, e.g. 3,2")
    a.add_argument("--op", required=True,
                   help="sigma | delta | delta^k | transfer | weight | 'norm j'")
    a.add_argument("expr", nargs="?", default="", help="polynomial, e.g. x[1,1]^2*x[2,1]")
    a.set_defaults(func=cmd_act)

    b = sub.add_parser("beta", help="formula vs computed beta for one case")
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--v", required=True)
    b.add_argument("--w", required=True)
    b.add_argument("--mode", choices=["formula", "compute", "both"], default="both")
    b.add_argument("--cap", type=int, default=None, help="degree cap override")
    b.set_defaults(func=cmd_beta)

    s = sub.add_parser("sweep", help="run a family of beta comparisons")
    s.add_argument("--p", required=True, help="comma-separated primes")
    s.add_argument("--max-blocks", type=int, required=True)
    s.add_argument("--max-block-size", type=int, required=True)
    s.add_argument("--w", required=True, help="comma-separated W block sizes")
    s.add_argument("--out", required=True, help="JSON report path (CSV written next to it)")
    s.add_argument("--cap", type=int, default=None, help="degree cap override")
    s.add_argument("--max-piece-dim", type=int, default=None,
                   help="skip cases whose largest graded piece exceeds this")
    s.add_argument("--max-case-seconds", type=float, default=None,
                   help="mark cases exceeding this wall-clock as over budget")
    s.set_defaults(func=cmd_sweep)

    d = sub.add_parser("decompose", help="split h = N_j*h1 + h2 (transfer h2)")
    d.add_argument("--p", type=int, required=True)
    d.add_argument("--v", required=True)
    d.add_argument("--w", required=True, help="single W block size")
    d.add_argument("--j", type=int, required=True, help="block index for the norm")
    d.add_argument("file", help="covariant: one component per line ('-' for stdin)")
    d.set_defaults(func=cmd_decompose)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
