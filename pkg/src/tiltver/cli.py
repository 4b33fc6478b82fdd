"""Command-line interface: characters, decompositions, cells, p-adic dimensions, verification."""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys

from . import __version__
from .cache import ResultCache, default_cache_dir, request_key
from .characters import (
    Character,
    cell_index,
    exterior_char,
    gl_restriction_char,
    padic_dim_minus,
    simple_char,
    tilting_char,
    weyl_char,
)
from .config import dimension_cap
from .errors import (
    Inconclusive,
    NotTiltingCharacter,
    PreconditionError,
    ResourceBudgetError,
    TiltverError,
)
from .verify import claims
from .verify.checker import check_report
from .verify.diagram import verify_diagram_split
from .verify.report import canonical_json, stable_json

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("tiltver")


class UsageError(Exception):
    pass


# -- module expressions ---------------------------------------------------------------

_ATOM = re.compile(r"^(V1|1|T\d+|L\d+|St\d+|Fr\(.+\))(?:\^(\d+))?$")


def parse_module(p: int, expr: str):
    """Build a module from e.g. ``V1^3``, ``St1*St1``, ``T4*Fr(T1)``, ``L2*V1``."""
    from .slmod.module import frobenius_twist, natural_module, tensor, tensor_power, trivial_module
    from .slmod.named import simple_module, steinberg, tilting_module

    def atom(tok: str):
        m = _ATOM.match(tok)
        if not m:
            raise UsageError(f"cannot parse module factor {tok!r}")
        name, power = m.group(1), int(m.group(2) or 1)
        if name == "V1":
            M = natural_module(p)
        elif name == "1":
            M = trivial_module(p)
        elif name.startswith("Fr("):
            M = frobenius_twist(parse_module(p, name[3:-1]))
        elif name.startswith("St"):
            M = steinberg(p, int(name[2:]))
        elif name.startswith("T"):
            M = tilting_module(p, int(name[1:]))
        else:
            M = simple_module(p, int(name[1:]))
        return tensor_power(M, power)

    parts, depth, cur = [], 0, ""
    for ch in expr.replace(" ", ""):
        if ch == "*" and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += ch == "("
        depth -= ch == ")"
        cur += ch
    parts.append(cur)
    if not all(parts):
        raise UsageError(f"empty factor in module expression {expr!r}")
    out = atom(parts[0])
    for part in parts[1:]:
        out = tensor(out, atom(part))
    return out


# -- command handlers (each returns a JSON-ready payload) ------------------------------


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        sub = getattr(args, "kind", None) or getattr(args, "claim", None)
        what = f"{args.command} {sub}" if sub else args.command
        raise UsageError(f"{what} needs " + ", ".join(f"--{n}" for n in missing))


def cmd_char(args) -> dict:
    _need(args, "m")
    if args.kind == "weyl":
        ch = weyl_char(args.m)
    else:
        _need(args, "p")
        fn = {"simple": simple_char, "tilting": tilting_char, "gl-restriction": gl_restriction_char}
        ch = fn[args.kind](args.p, args.m)
    return ch.to_json()


def cmd_decompose(args) -> dict:
    from .decompose import decompose_module

    _need(args, "p")
    expr = args.module or (f"V1^{args.m}" if args.m is not None else None)
    if expr is None:
        raise UsageError("decompose needs --module or --m")
    M = parse_module(args.p, expr)
    cert = decompose_module(M, seed=args.seed)
    out = cert.to_json(with_witness=not args.no_witness)
    out["expression"] = expr
    return out


def cmd_cell(args) -> dict:
    _need(args, "p")
    if args.module:
        from .decompose import object_cell

        return object_cell(parse_module(args.p, args.module), seed=args.seed).to_json()
    _need(args, "m")
    return cell_index(args.p, args.m).to_json()


def cmd_padic(args) -> dict:
    _need(args, "p", "m")
    ch = simple_char(args.p, args.m)
    dims = [exterior_char(ch, s).dim for s in range(ch.dim + 2)]
    D = padic_dim_minus(args.p, dims)
    return {"module": f"L{args.m}", "exterior_dims": dims, **D.to_json(), "value": D.value}


def cmd_verify(args) -> dict:
    c, wit, t = args.claim, not args.no_witness, args.timing
    if c == "splitpres":
        _need(args, "p", "j", "m", "imax")
        rep = claims.verify_splitpres(args.p, args.j, args.m, args.imax, args.seed, t, wit)
    elif c == "thm-w":
        _need(args, "p", "n", "m", "imax")
        rep = claims.verify_thm_w(args.p, args.n, args.m, args.imax, args.seed, t, wit)
    elif c == "gl-vanishing":
        _need(args, "p", "m", "smax")
        rep = claims.verify_gl_vanishing(args.p, args.m, args.smax, t)
    elif c == "diagram":
        _need(args, "p", "n")
        rep = verify_diagram_split(args.p, args.n, t, wit)
    elif c == "example-w":
        _need(args, "p", "n")
        rep = claims.verify_example_w(args.p, args.n, t)
    elif c == "rem-mn":
        _need(args, "p", "n")
        rep = claims.verify_rem_mn(args.p, args.n, t)
    elif c == "staysl2":
        _need(args, "p", "s", "j", "imax")
        rep = claims.verify_staysl2_bound(args.p, args.s, args.j, args.imax, args.module_check, t)
    else:
        _need(args, "p", "n")
        rep = claims.verify_gr_instance(args.p, args.n, args.seed, t, wit)
    return rep.to_json()


HANDLERS = {"char": cmd_char, "decompose": cmd_decompose, "cell": cmd_cell,
            "padic-dim": cmd_padic, "verify": cmd_verify}

_PARAMS = ("p", "n", "m", "j", "s", "imax", "smax", "module", "dim_cap", "no_witness", "module_check")


def build_request(args) -> dict:
    sub = getattr(args, "kind", None) or getattr(args, "claim", None)
    params = {k: getattr(args, k, None) for k in _PARAMS}
    return {
        "command": args.command,
        "sub": sub,
        "params": {k: v for k, v in params.items() if v not in (None, False)},
        "seed": args.seed,
        "version": __version__,
    }


def payload_status(command: str, payload: dict) -> int:
    if command != "verify":
        return EXIT_OK
    return {"pass": EXIT_OK, "out-of-budget": EXIT_BUDGET}.get(payload["status"], EXIT_FAIL)


# -- text rendering --------------------------------------------------------------------


def render_text(command: str, payload: dict) -> str:
    if command == "char":
        return Character.from_json(payload).render()
    if command == "cell":
        return f"cell {payload['cell']}"
    if command == "padic-dim":
        return f"Dim_-({payload['module']}) = {payload['value']} (p-adic digits {payload['digits']})"
    if command == "decompose":
        terms = " ⊕ ".join(
            f"T{m}" if c == 1 else f"{c}·T{m}" for m, c in payload["multiset"].items()
        )
        return f"{payload['expression']} ≅ {terms or '0'}"
    lines = [f"{payload['claim']} {payload['params']}: {payload['status']}"]
    lines += [f"  {n}" for n in payload["witnesses"].get("notes", [])]
    return "\n".join(lines)


# -- argument parsing ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for flag in ("p", "n", "m", "j", "s", "imax", "smax"):
        common.add_argument(f"--{flag}", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cache-dir", help="cache directory (default: $TILTVER_CACHE_DIR or ./.tiltver-cache)")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    common.add_argument("--dim-cap", type=int, help="largest module dimension to construct")
    common.add_argument("--no-witness", action="store_true", help="omit witness matrices")
    common.add_argument("--timing", action="store_true", help="record wall-clock time (bypasses the cache)")

    parser = argparse.ArgumentParser(prog="tiltver", description=__doc__)
    parser.add_argument("--version", action="version", version=f"tiltver {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("char", parents=[common], help="characters as weight -> multiplicity")
    pc.add_argument("kind", choices=("weyl", "simple", "tilting", "gl-restriction"))

    pd = sub.add_parser("decompose", parents=[common], help="certified tilting decomposition")
    pd.add_argument("--module", help="module expression such as V1^3 or St1*St1 (default V1^m)")

    pl = sub.add_parser("cell", parents=[common], help="tensor-ideal cell of T_m or of a module")
    pl.add_argument("--module", help="module expression; its cell is the minimum over summands")

    sub.add_parser("padic-dim", parents=[common], help="p-adic dimension Dim_- of L_m")

    pv = sub.add_parser("verify", parents=[common], help="run a claim check and print its report")
    pv.add_argument("claim", choices=("splitpres", "thm-w", "gl-vanishing", "diagram",
                                      "example-w", "rem-mn", "staysl2", "gr"))
    pv.add_argument("--module-check", action="store_true", help="staysl2: also split the sequences")

    pk = sub.add_parser("cache", parents=[common], help="inspect or clean the result cache")
    pk.add_argument("action", choices=("ls", "gc"))
    return parser


def _cache_for(args) -> ResultCache:
    root = args.cache_dir or default_cache_dir()
    return ResultCache(root, validator=_validator)


def _validator(payload: dict) -> list[str]:
    if "claim" in payload:
        return check_report(payload)
    return []


def _cache_command(args) -> int:
    cache = _cache_for(args)
    if args.action == "gc":
        print(json.dumps({"removed": cache.gc()}) if args.format == "json" else f"removed {cache.gc()} entries")
        return EXIT_OK
    rows = []
    for path, entry in cache.entries():
        if entry is None:
            rows.append({"key": path.stem, "corrupt": True})
        else:
            rows.append({"key": entry.key, "command": entry.request["command"],
                         "sub": entry.request.get("sub"), "params": entry.request["params"],
                         "version": entry.version})
    if args.format == "json":
        print(canonical_json(rows))
    else:
        for r in rows:
            print(r["key"][:16], "corrupt" if r.get("corrupt") else f"{r['command']} {r['sub'] or ''} {r['params']}")
    return EXIT_OK


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.WARNING, format="tiltver: %(message)s")
    if args.command == "cache":
        return _cache_command(args)
    if args.dim_cap is not None and args.dim_cap < 1:
        print("tiltver: --dim-cap must be positive", file=sys.stderr)
        return EXIT_USAGE

    request = build_request(args)
    use_cache = not args.no_cache and not args.timing
    cache = _cache_for(args) if use_cache else None
    payload = None
    if cache is not None:
        hit = cache.get(request_key(request))
        payload = hit.payload if hit else None
    if payload is None:
        try:
            if args.dim_cap is not None:
                with dimension_cap(args.dim_cap):
                    payload = HANDLERS[args.command](args)
            else:
                payload = HANDLERS[args.command](args)
        except UsageError as exc:
            print(f"tiltver: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except ResourceBudgetError as exc:
            print(f"tiltver: out of budget: {exc}", file=sys.stderr)
            return EXIT_BUDGET
        except (PreconditionError, ValueError) as exc:
            if isinstance(exc, NotTiltingCharacter):
                print(f"tiltver: character not tilting: {exc}", file=sys.stderr)
                return EXIT_FAIL
            print(f"tiltver: {exc}", file=sys.stderr)
            return EXIT_USAGE
        except Inconclusive as exc:
            print(f"tiltver: inconclusive: {exc}", file=sys.stderr)
            return EXIT_FAIL
        except TiltverError as exc:
            print(f"tiltver: {exc}", file=sys.stderr)
            return EXIT_FAIL
        payload = json.loads(stable_json(payload))
        if cache is not None:
            cache.put(request, payload)
    if args.format == "json":
        sys.stdout.write(stable_json(payload) + "\n")
    else:
        sys.stdout.write(render_text(args.command, payload) + "\n")
    return payload_status(args.command, payload)


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
