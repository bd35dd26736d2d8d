"""Command line front end: ``rcx <command> [options]``.

Exit codes: 0 success, 1 domain error, 2 usage error (bad flags or a
malformed expression).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .development import dev_compute, ladder_triple, trivial_triple, triple_from_basis
from .errors import RcxError
from .evaluate import DEFAULT_DEPTH, EvalEnv, eval_text
from .exp import GadgetSpec, chain_run, dyadic_check, exp_series, gadget_build
from .intpart import ip_exp, ip_floor
from .parser import ExprSyntaxError
from .series import Series


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _env(args, depth: int | None = None) -> EvalEnv:
    return EvalEnv.default(depth or args.depth, args.cutoff)


def _series_out(s: Series) -> dict:
    out = s.to_json()
    out["text"] = str(s)
    return out


def cmd_eval(args) -> int:
    s = eval_text(args.expr, _env(args))
    _emit(args, {"expr": args.expr, "series": _series_out(s)}, str(s))
    return 0


def cmd_dev(args) -> int:
    env = _env(args)
    r = eval_text(args.expr, env)
    tri = trivial_triple(env.reg) if args.triple == "trivial" else ladder_triple(env.reg)
    dev = dev_compute(r, tri, args.len)
    payload = dev.to_json()
    payload["text"] = str(dev.prefix)
    lines = [f"prefix: {dev.prefix}", f"case: {dev.case}"]
    lines += [f"  g={s.g}  a={s.a}" for s in dev.steps]
    _emit(args, payload, "\n".join(lines))
    return 0


def _ip_out(e) -> dict:
    return {"infinite": _series_out(e.infinite), "z": e.z, "non_integral": e.non_integral,
            "text": str(e)}


def cmd_ip(args) -> int:
    e = ip_floor(eval_text(args.expr, _env(args)))
    _emit(args, _ip_out(e), str(e))
    return 0


def cmd_ipexp(args) -> int:
    env = _env(args)
    e = ip_floor(eval_text(args.expr, env))
    out = ip_exp(e, env.reg)
    payload = {"floor": _ip_out(e), "exp": _ip_out(out)}
    _emit(args, payload, f"2^({e}) = {out}")
    return 0


def cmd_dyadic(args) -> int:
    env = _env(args, args.ladder)
    basis = [env.reg.ladder(i) for i in range(env.reg.depth)]
    for text in args.orphan or ():
        # a generator 2^r whose logarithm is not part of the field
        basis.append(exp_series(eval_text(text, env), env.reg).terms[0][1])
    tri = triple_from_basis(env.reg, basis)
    samples = None
    if args.sample:
        samples = [env.monomial_of(t) for t in args.sample]
    rep = dyadic_check(tri, samples)
    lines = [f"passed: {rep.passed}"] + [f"  {f['direction']}: {f['sample']}: {f['reason']}"
                                         for f in rep.failures]
    _emit(args, rep.to_json(), "\n".join(lines))
    return 0


def read_agenda(path: str) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read agenda file: {exc}") from exc
    out = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def cmd_chain(args) -> int:
    env = _env(args, args.ladder)
    texts = read_agenda(args.agenda) if args.agenda else []
    agenda = [eval_text(t, env) for t in texts]
    y = eval_text(args.y, env)
    st = chain_run(y, args.stages, agenda, env.reg.depth, names=texts)
    payload = st.to_json()
    lines = [f"stage {st.stage}"]
    for m in st.members:
        lines.append(f"  {m.name}: entered B_{m.entered} ({m.kind})"
                     + (f", 2^r in H_{m.exp_stage}" if m.exp_stage is not None else ""))
    for name, _ in st.pending:
        lines.append(f"  {name}: not developable by the last stage")
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_gadget(args) -> int:
    limit = None
    if args.limit:
        try:
            limit = tuple(int(t) for t in args.limit.split(","))
        except ValueError as exc:
            raise UsageError(f"--limit expects comma separated integers: {args.limit}") from exc
    spec = GadgetSpec(args.beta, args.imax, args.ladder, limit)
    consts, rep = gadget_build(spec)
    names = {f"c_{{{b},{i}}}": str(s) for (b, i), s in consts.items()}
    payload = {"constants": names, **rep.to_json()}
    lines = [f"{k} = {v}" for k, v in names.items()]
    lines += [f"{row['display']}: {'ok' if row['ok'] else 'FAILED'}" for row in rep.interleaving]
    lines += [f"{p['constant']} enters H at stage {p['entered_h_stage']}: {'ok' if p['ok'] else 'FAILED'}"
              for p in rep.placement]
    _emit(args, payload, "\n".join(lines))
    return 0 if rep.ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--cutoff", metavar="EXPR", default=argparse.SUPPRESS,
                        help="relative precision monomial, default x^(-8)")
    common.add_argument("--depth", type=int, default=argparse.SUPPRESS,
                        help=f"ladder depth of the registry (default {DEFAULT_DEPTH})")

    p = argparse.ArgumentParser(prog="rcx", parents=[common],
                                description="Exact series arithmetic with a base-2 exponential.")
    p.set_defaults(format="json", cutoff=None, depth=DEFAULT_DEPTH)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    s.add_argument("--expr", required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("dev", parents=[common], help="develop an expression over a triple")
    s.add_argument("--expr", required=True)
    s.add_argument("--len", type=int, default=8)
    s.add_argument("--triple", choices=("ladder", "trivial"), default="ladder")
    s.set_defaults(func=cmd_dev)

    s = sub.add_parser("ip", parents=[common], help="integer part of an expression")
    s.add_argument("--expr", required=True)
    s.set_defaults(func=cmd_ip)

    s = sub.add_parser("ipexp", parents=[common], help="2 to the integer part of an expression")
    s.add_argument("--expr", required=True)
    s.set_defaults(func=cmd_ipexp)

    s = sub.add_parser("dyadic-check", parents=[common], help="check the dyadic condition")
    s.add_argument("--ladder", type=int, default=None)
    s.add_argument("--sample", action="append", metavar="EXPR", help="monomial of H to test")
    s.add_argument("--orphan", action="append", metavar="EXPR",
                   help="add 2^EXPR to H without putting EXPR in the field")
    s.set_defaults(func=cmd_dyadic)

    s = sub.add_parser("chain", parents=[common], help="run the stage chain on an agenda")
    s.add_argument("--stages", type=int, required=True)
    s.add_argument("--agenda", metavar="FILE")
    s.add_argument("--ladder", type=int, default=None)
    s.add_argument("--y", default="x", metavar="EXPR")
    s.set_defaults(func=cmd_chain)

    s = sub.add_parser("gadget", parents=[common], help="build the constants c_{beta,i}")
    s.add_argument("--beta", type=int, required=True)
    s.add_argument("--imax", type=int, required=True)
    s.add_argument("--ladder", type=int, required=True)
    s.add_argument("--limit", metavar="G1,G2,...", help="cofinal successor levels of a limit level")
    s.set_defaults(func=cmd_gadget)
    return p


def _fail(args, code: int, exc: BaseException) -> int:
    msg = f"rcx: {type(exc).__name__}: {exc}"
    if isinstance(exc, ExprSyntaxError) and exc.text:
        msg += f"\n  {exc.text}\n  {' ' * exc.position}^"
    print(msg, file=sys.stderr)
    if getattr(args, "format", "json") == "json":
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}))
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ExprSyntaxError, UsageError) as exc:
        return _fail(args, 2, exc)
    except (RcxError, ZeroDivisionError, ValueError) as exc:
        return _fail(args, 1, exc)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
