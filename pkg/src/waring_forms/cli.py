"""Command-line front end: ``waring-forms <subcommand> ...``.

Every command prints one JSON object with ``--json`` (schema
``waring-forms/1``) or ``key: value`` lines otherwise. Exit status is 0 on
success, 1 on a domain error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any

from . import acceptance, apolarity, hypersurface, partitions, strata
from .binpoly import BinaryForm, LinearForm, format_form, parse_form
from .errors import ConstraintError, SearchExhausted, WaringError
from .scalar import ModP, check_degree, format_scalar, make_rng, parse_field

SCHEMA = "waring-forms/1"
MAX_SEED = 2**64 - 1


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must lie in [0, 2^64 - 1]")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _plain(x: Any) -> Any:
    """Recursively convert results into JSON-friendly values; scalars become
    exact strings."""
    if isinstance(x, BinaryForm):
        return format_form(x)
    if isinstance(x, LinearForm):
        return str(x)
    if isinstance(x, (Fraction, ModP)):
        return format_scalar(x)
    if isinstance(x, partitions.Partition):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


# ---------------------------------------------------------------------------
# handlers: each returns a payload dict

def _form(args, text: str) -> BinaryForm:
    f = parse_form(text, args.field_obj)
    check_degree(args.field_obj, f.degree)
    return f


def _rank_payload(f: BinaryForm) -> dict:
    cert = apolarity.waring_rank(f)
    return {
        "form": f,
        "degree": f.degree,
        "rank": cert.rank,
        "d1": cert.d1,
        "d2": cert.d2,
        "g1": cert.g1,
        "g2": cert.g2,
        "g1_squarefree": cert.g1_squarefree,
        "g1_profile": [list(t) for t in cert.g1_profile],
        "border_rank": apolarity.border_rank(f),
    }


def cmd_rank(args):
    return _rank_payload(_form(args, args.form))


def cmd_decompose(args):
    f = _form(args, args.form)
    res = apolarity.decompose(f, make_rng(args.seed), height=min(args.height, 20))
    out = _rank_payload(f)
    out["generator"] = res.generator
    out["attempts"] = res.attempts
    if res.decomposition is None:
        out["decomposition"] = None
        out["note"] = "no squarefree generator split over the base field among the tried ones"
    else:
        out["decomposition"] = [{"coef": c, "linear": l} for c, l in res.decomposition.terms]
    return out


def cmd_apolar(args):
    f = _form(args, args.form)
    pair = apolarity.apolar_pair(f)
    return {"form": f, "degree": f.degree, "g1": pair.g1, "g2": pair.g2, "d1": pair.d1, "d2": pair.d2}


def cmd_cat(args):
    f = _form(args, args.form)
    M = apolarity.catalecticant(f, args.e)
    from .exactla import rank

    return {"form": f, "e": args.e, "shape": [len(M), len(M[0])], "matrix": M, "rank": rank(M, f.field)}


def cmd_border_rank(args):
    f = _form(args, args.form)
    return {"form": f, "degree": f.degree, "border_rank": apolarity.border_rank(f)}


def cmd_partition(args):
    op = args.op
    P = partitions.parse_parts
    if op == "dim":
        lam = P(args.parts[0])
        return {"partition": lam, "dim": partitions.dim_delta(lam)}
    if op == "dim-dual":
        lam = P(args.parts[0])
        return {"partition": lam, "dim_dual": partitions.dim_dual(lam)}
    if op == "deg":
        lam = P(args.parts[0])
        return {"partition": lam, "degree": partitions.deg_delta(lam)}
    if op == "deg-dual":
        lam = P(args.parts[0])
        return {"partition": lam, "degree_dual": partitions.deg_dual(lam)}
    if op == "refines":
        mu, lam = P(args.parts[0]), P(args.parts[1])
        return {"mu": mu, "lambda": lam, "refines": partitions.refines(mu, lam)}
    if op == "dual-incl":
        lam, mu = P(args.parts[0]), P(args.parts[1])
        return {"lambda": lam, "mu": mu, "included": partitions.dual_included(lam, mu)}
    if op == "conormal":
        lam = P(args.parts[0])
        rng = make_rng(args.seed)
        height = min(args.height, 10) if args.height else 10
        samples = []
        for _ in range(args.n):
            s = partitions.conormal_sample(lam, rng, args.field_obj, height)
            samples.append({"f": s.f, "g": s.g, "annihilated": partitions.annihilation_check(s)})
        return {"partition": lam, "n": args.n, "samples": samples}
    raise ConstraintError(f"unknown partition operation {op!r}")


def cmd_sample(args):
    f, cert = strata.sample_rank_r(args.d, args.r, make_rng(args.seed), args.field_obj, args.height)
    return {"d": args.d, "r": args.r, "form": f, "rank": cert.rank, "border_rank": apolarity.border_rank(f)}


def cmd_census(args):
    c = strata.stratum_census(args.d, args.k, args.samples or 200, make_rng(args.seed), args.field_obj, args.height)
    return {
        "d": args.d,
        "k": args.k,
        "samples": c.samples,
        "allowed": sorted(c.allowed),
        "frequencies": dict(sorted(c.frequencies.items())),
        "by_kind": {k: dict(sorted(v.items())) for k, v in sorted(c.by_kind.items())},
        "flagged": [{"kind": k, "rank": r, "form": f} for k, r, f in c.failures],
    }


def cmd_tangent(args):
    kind = args.special or "generic"
    pt = strata.special_point(args.d, args.k, kind, make_rng(args.seed), args.field_obj, args.height)
    dim = strata.tangent_dimension(pt)
    bound = 2 * args.k + 3 if kind == "generic" else 2 * args.k + 2
    return {
        "d": args.d,
        "k": args.k,
        "kind": kind,
        "form": pt.f,
        "l": list(pt.ls),
        "g": pt.g,
        "affine_dimension": dim,
        "expected" if kind == "generic" else "at_most": bound,
    }


def cmd_chain(args):
    f = _form(args, args.form)
    start = apolarity.waring_rank(f).rank
    try:
        steps = strata.rank_raising_chain(f, make_rng(args.seed), height=args.height)
    except SearchExhausted as exc:
        if f.field.characteristic:
            raise
        raise SearchExhausted(
            f"{exc}; over Q the crossings near the generic rank need coefficients outside Q, "
            "a prime field such as --field fp:1009 usually succeeds"
        ) from None
    g = f
    for st in steps:
        g = g + st.l.power(f.degree, f.field) * st.c
    return {
        "form": f,
        "start_rank": start,
        "steps": [{"l": st.l, "c": st.c, "rank": st.rank} for st in steps],
        "final": g,
        "final_rank": apolarity.waring_rank(g).rank,
    }


def cmd_hyp(args):
    op = args.op
    ctx = hypersurface.context_make(args.k)
    if op == "degree":
        return {"k": args.k, "degree": hypersurface.degree_of_equation(ctx)}
    if op in ("value", "grad"):
        f = _form(args, args.form)
        if op == "value":
            return {"k": args.k, "form": f, "q": hypersurface.q_form(f), "value": hypersurface.defining_value(ctx, f)}
        grad = hypersurface.defining_gradient(ctx, f)
        return {"k": args.k, "form": f, "gradient": grad, "zero": all(x == 0 for x in grad)}
    if op == "probe-singular":
        d = 2 * args.k + 1
        rng = make_rng(args.seed)
        n = args.samples or 20
        zero_value = zero_grad = 0
        for _ in range(n):
            f, _ = strata.sample_rank_r(d, args.rank, rng, args.field_obj, args.height)
            zero_value += hypersurface.defining_value(ctx, f) == 0
            zero_grad += all(x == 0 for x in hypersurface.defining_gradient(ctx, f))
        return {"k": args.k, "d": d, "rank": args.rank, "samples": n, "value_zero": zero_value, "gradient_zero": zero_grad}
    raise ConstraintError(f"unknown hyp operation {op!r}")


def cmd_verify(args):
    ks = (args.k,) if args.k else (1, 2, 3)
    echo = None if args.json else (lambda line: print(line, flush=True))
    rep = acceptance.run_suite(args.suite, args.seed, args.budget, ks, echo=echo)
    payload = {
        "suite": rep.suite,
        "passed": rep.passed,
        "partial": rep.partial,
        "skipped": rep.skipped,
        "results": [
            {"criterion": r.cid, "title": r.title, "passed": r.passed, "counts": r.counts, "notes": r.notes}
            for r in rep.results
        ],
    }
    return payload, 0 if rep.passed else 1


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="q (default) or fp:<p>")
    common.add_argument("--seed", type=_seed, default=0, help="RNG seed, 0 <= seed < 2^64 (default 0)")
    common.add_argument("--json", action="store_true", help="emit one JSON object")
    common.add_argument("--samples", type=_positive, default=None)
    common.add_argument("--height", type=_positive, default=strata.DEFAULT_HEIGHT)

    p = argparse.ArgumentParser(prog="waring-forms", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    add("rank", cmd_rank, "Waring rank with its apolar certificate").add_argument("form")
    add("decompose", cmd_decompose, "minimal decomposition over the base field").add_argument("form")
    add("apolar", cmd_apolar, "generators of the apolar ideal").add_argument("form")
    sp = add("cat", cmd_cat, "catalecticant matrix in degree e")
    sp.add_argument("form")
    sp.add_argument("--e", type=int, required=True)
    add("border-rank", cmd_border_rank, "rank of the middle catalecticant").add_argument("form")

    sp = add("partition", cmd_partition, "partition calculus")
    sp.add_argument("op", choices=["dim", "dim-dual", "deg", "deg-dual", "refines", "dual-incl", "conormal"])
    sp.add_argument("parts", nargs="+", help="comma lists such as 3,2,1,1")
    sp.add_argument("--n", type=_positive, default=1, help="conormal samples")

    sp = add("sample", cmd_sample, "random form of a given rank")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)

    sp = add("census", cmd_census, "rank census of a suprageneric family")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)

    sp = add("tangent", cmd_tangent, "tangent dimension at a point of the family")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--special", choices=["g-eq-l0", "li-eq-lj"])

    add("chain", cmd_chain, "raise the rank one power at a time up to d").add_argument("form")

    hyp = sub.add_parser("hyp", help="the rank k+2 hypersurface in degree 2k+1")
    hyp_sub = hyp.add_subparsers(dest="op", required=True)
    for op, help_ in (
        ("value", "value of the defining equation"),
        ("grad", "gradient with respect to the coefficients"),
        ("degree", "degree of the equation"),
        ("probe-singular", "value and gradient on random forms of a given rank"),
    ):
        sp = hyp_sub.add_parser(op, parents=[common], help=help_)
        sp.set_defaults(func=cmd_hyp)
        if op in ("value", "grad"):
            sp.add_argument("form")
        sp.add_argument("--k", type=int, required=True)
        if op == "probe-singular":
            sp.add_argument("--rank", type=int, required=True)

    sp = add("verify", cmd_verify, "run acceptance checks")
    sp.add_argument("suite", choices=["apolarity", "strata", "partitions", "hypersurface", "all"])
    sp.add_argument("--budget", type=float, default=None, help="seconds; later checks are skipped")
    sp.add_argument("--k", type=int, default=None, help="restrict hypersurface checks to one k")
    return p


def _emit_text(payload: dict) -> None:
    for key, value in payload.items():
        if key == "schema":
            continue
        if isinstance(value, list) and value and isinstance(value[0], (dict, list)):
            print(f"{key}:")
            for item in value:
                print(f"  {json.dumps(item) if isinstance(item, (dict, list)) else item}")
        elif isinstance(value, (dict, list)):
            print(f"{key}: {json.dumps(value)}")
        else:
            print(f"{key}: {value}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    head = {"schema": SCHEMA, "command": args.command}
    try:
        args.field_obj = parse_field(args.field)
        head["field"] = args.field_obj.spec()
        head["seed"] = args.seed
        result = args.func(args)
    except WaringError as exc:
        err = {"kind": exc.kind, "message": str(exc)}
        if args.json:
            print(json.dumps({**head, "error": err}))
        else:
            print(f"error ({exc.kind}): {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(result, tuple):
        result, code = result
    payload = {**head, **_plain(result)}
    if args.json:
        print(json.dumps(payload))
    elif args.command == "verify":
        if payload["partial"]:
            print(f"PARTIAL: budget exceeded, not run: {', '.join(payload['skipped'])}")
        print("OK" if payload["passed"] else "FAILED")
    else:
        _emit_text(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
