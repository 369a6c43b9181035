"""Command-line front-end.

Exit codes: 0 verdict true (or artifact written), 1 verdict false,
2 input error, 3 capability error or engine mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import __version__
from .automata import automata_check, build_gaaba, degeneralize
from .automata.dump import dump_automaton
from .automata.emptiness import model_check, satisfiability
from .core_model import format_kripke, format_traces, parse_kripke, parse_traces
from .formula import FormulaSyntaxError, load_tables, parse, to_text
from .formula import ast as A
from .reductions.embeddings import (EmbeddingError, embed_sync_ctl, embed_sync_ltl_exists,
                                    embed_sync_ltl_forall, in_fragment)
from .reductions.n2c import MachineError, encode_n2c, parse_machine
from .semantics import CapabilityError, check_mode, eval_formula
from .tef import SYNC, format_tef, kcb, ksync, parse_tef

SCHEMA = "teamlogic/1"
TRUE, FALSE, INPUT_ERROR, CAPABILITY = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _formula(args):
    if not args.formula:
        raise InputError("a formula is required (-f)")
    text = args.formula
    if text.startswith("@"):
        text = _read(text[1:])
    tables = load_tables(args.tables) if getattr(args, "tables", None) else None
    try:
        return parse(text, tables)
    except FormulaSyntaxError as e:
        raise InputError(f"formula: {e}") from None


def _family(args):
    if args.family == "sync":
        return SYNC
    if args.k is None:
        raise InputError(f"family {args.family} needs -k")
    if args.k < 0:
        raise InputError("k must be nonnegative")
    return ksync(args.k) if args.family == "ksync" else kcb(args.k)


def _enumerable(family):
    return family.kind in ("sync", "kcb")


def _emit(args, payload, lines):
    payload = {"schema": SCHEMA, **payload}
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


# ---------------------------------------------------------------- commands


def cmd_pathcheck(args):
    phi = _formula(args)
    if not args.traces:
        raise InputError("pathcheck needs --traces")
    try:
        team = parse_traces(_read(args.traces))
    except ValueError as e:
        raise InputError(f"traces: {e}") from None
    family = _family(args)
    if args.dump_automaton:
        write_atomic(args.dump_automaton, dump_automaton(build_gaaba(phi, len(team))))

    if args.tef:
        try:
            tef = parse_tef(_read(args.tef), len(team))
        except ValueError as e:
            raise InputError(f"tef: {e}") from None
        holds = eval_formula(team, tef, phi, family)
        _emit(args, {"command": "pathcheck", "verdict": holds, "engine": "evaluator", "tef": format_tef(tef),
                     "family": str(family)}, [str(holds).lower(), format_tef(tef)])
        return TRUE if holds else FALSE

    engines = {}
    if _enumerable(family) or args.cross_check:
        if not _enumerable(family):
            raise CapabilityError(f"cross-check needs an enumerable family, got {family}")
        r = check_mode(team, phi, args.mode, family)
        engines["evaluator"] = (r.holds, r.tef)
    if not engines or args.cross_check:
        v = automata_check(team, phi, args.mode, family)
        engines["automata"] = (v.holds, v.tef)
    verdicts = {name: h for name, (h, _) in engines.items()}
    if len(set(verdicts.values())) > 1:
        _emit(args, {"command": "pathcheck", "verdict": None, "mismatch": verdicts},
              [f"mismatch: {verdicts}"])
        return CAPABILITY
    holds, tef = next(iter(engines.values()))
    role = "counterexample" if args.mode == "forall" else "witness"
    tef_text = format_tef(tef) if tef is not None else None
    lines = [str(holds).lower()]
    if tef_text is not None:
        lines.append(f"{role}: {tef_text}")
    _emit(args, {"command": "pathcheck", "verdict": holds, "engine": "+".join(engines), "mode": args.mode,
                 "family": str(family), "tef": tef_text, "tef_role": role if tef_text else None}, lines)
    return TRUE if holds else FALSE


def _team_size(args):
    if args.n is None:
        raise InputError("-n is required")
    if args.n < 0:
        raise InputError("-n must be nonnegative")
    return args.n


def _problem_report(args, command, r, role):
    team_text = format_traces(r.team) if r.team is not None else None
    tef_text = format_tef(r.tef) if r.tef is not None else None
    lines = [str(r.holds).lower()]
    if not r.exact:
        lines.append("note: bounded search, verdict not exact")
    lines += [f"note: {x}" for x in r.notes]
    if team_text:
        lines.append(f"{role} team:")
        lines.append(team_text.rstrip("\n"))
    if tef_text:
        lines.append(f"{role} tef: {tef_text}")
    if args.out and team_text:
        write_atomic(args.out, team_text)
    _emit(args, {"command": command, "verdict": r.holds, "exact": r.exact, "method": r.method,
                 "checked": r.checked, "traces": team_text, "tef": tef_text, "role": role}, lines)
    return TRUE if r.holds else FALSE


def cmd_mc(args):
    phi = _formula(args)
    n = _team_size(args)
    if n < 1:
        raise InputError("-n must be at least 1")
    if not args.kripke:
        raise InputError("mc needs --kripke")
    try:
        k = parse_kripke(_read(args.kripke))
    except ValueError as e:
        raise InputError(f"kripke: {e}") from None
    r = model_check(k, phi, n, args.mode, _family(args), args.max_prefix, args.max_cycle)
    return _problem_report(args, "mc", r, "counterexample")


def cmd_sat(args):
    phi = _formula(args)
    n = _team_size(args)
    aps = args.aps.split(",") if args.aps else None
    r = satisfiability(phi, n, args.mode, _family(args), aps, args.max_prefix, args.max_cycle)
    return _problem_report(args, "sat", r, "witness")


def cmd_translate(args):
    phi = _formula(args)
    n = _team_size(args)
    a = build_gaaba(phi, n)
    if args.degeneralize:
        a = degeneralize(a)
    text = dump_automaton(a)
    if args.out:
        write_atomic(args.out, text)
    if args.json:
        _emit(args, {"command": "translate", "states": len(a.states()), "acceptance_sets": a.m,
                     "automaton": text}, [])
    elif not args.out:
        sys.stdout.write(text)
    else:
        print(f"{len(a.states())} states, {a.m} acceptance set(s) -> {args.out}")
    return TRUE


EMBEDDINGS = {
    "ltl-exists": (lambda f: embed_sync_ltl_exists(f), "exists-ltl"),
    "ltl-forall": (lambda f: embed_sync_ltl_forall(f), "forall-ltl"),
    "ctl-exists": (lambda f: embed_sync_ctl(f, "exists"), "exists-ctl"),
    "ctl-forall": (lambda f: embed_sync_ctl(f, "forall"), "forall-ctl"),
}


def cmd_embed(args):
    phi = _formula(args)
    fn, fragment = EMBEDDINGS[args.variant]
    try:
        out = fn(phi)
    except EmbeddingError as e:
        raise InputError(str(e)) from None
    allow = {type(f) for f in A.subformulas(phi)}
    ok = in_fragment(out, fragment, allow)
    text = to_text(out)
    if args.out:
        write_atomic(args.out, text + "\n")
    _emit(args, {"command": "embed", "variant": args.variant, "formula": text, "fragment": fragment,
                 "in_fragment": ok}, [text] if not args.out else [f"{fragment}: {ok}"])
    return TRUE if ok else CAPABILITY


def cmd_encode_n2c(args):
    if not args.machine:
        raise InputError("encode-n2c needs --machine")
    try:
        m = parse_machine(_read(args.machine))
        enc = encode_n2c(m, args.b)
    except MachineError as e:
        raise InputError(str(e)) from None
    ftext = to_text(enc.formula)
    ktext = format_kripke(enc.structure)
    if args.out_formula:
        write_atomic(args.out_formula, ftext + "\n")
    if args.out_kripke:
        write_atomic(args.out_kripke, ktext)
    lines = [f"instructions: {len(m)}", f"formula size: {enc.size}", f"structure states: {len(enc.structure.states)}"]
    if not args.out_formula:
        lines.append(ftext)
    _emit(args, {"command": "encode-n2c", "instructions": len(m), "label": enc.label, "size": enc.size,
                 "formula": ftext, "kripke": ktext}, lines)
    return TRUE


# ---------------------------------------------------------------- parser


def build_parser():
    p = argparse.ArgumentParser(prog="teamlogic", description="Team temporal logic toolkit")
    p.add_argument("--version", action="version", version=f"teamlogic {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, family=True):
        sp.add_argument("-f", "--formula", help="formula text, or @path to read it from a file")
        sp.add_argument("--tables", "--gen-tables", dest="tables", help="JSON tables for generalised atoms")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if family:
            sp.add_argument("--mode", choices=("exists", "forall", "sync"), default="exists")
            sp.add_argument("--family", choices=("ksync", "kctx", "sync"), default="ksync")
            sp.add_argument("-k", type=int, help="family parameter (required for ksync and kctx)")

    sp = sub.add_parser("pathcheck", help="check a formula on a finite team of lasso traces")
    common(sp)
    sp.add_argument("--traces", help="trace file")
    sp.add_argument("--tef", help="evaluate under this tef instead of quantifying")
    sp.add_argument("--cross-check", action="store_true", help="run evaluator and automata, compare")
    sp.add_argument("--dump-automaton", metavar="PATH")
    sp.set_defaults(run=cmd_pathcheck)

    for name, fn, helptext in (("mc", cmd_mc, "fixed-size model checking"), ("sat", cmd_sat, "fixed-size satisfiability")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        sp.add_argument("-n", type=int, help="team size")
        sp.add_argument("--out", metavar="PATH", help="write the witness/counterexample team here")
        sp.add_argument("--max-prefix", type=int, default=2 if name == "mc" else 1)
        sp.add_argument("--max-cycle", type=int, default=2)
        if name == "mc":
            sp.add_argument("--kripke", help="Kripke structure file")
        else:
            sp.add_argument("--aps", help="comma-separated propositions (default: those of the formula)")
        sp.set_defaults(run=fn)

    sp = sub.add_parser("translate", help="dump the automaton of a formula")
    common(sp, family=False)
    sp.add_argument("-n", type=int, help="team size")
    sp.add_argument("--degeneralize", action="store_true")
    sp.add_argument("--out", "-o", metavar="PATH")
    sp.set_defaults(run=cmd_translate)

    sp = sub.add_parser("embed", help="embed a synchronous formula into an asynchronous fragment")
    common(sp, family=False)
    sp.add_argument("--variant", choices=sorted(EMBEDDINGS), default="ltl-exists")
    sp.add_argument("--out", "-o", metavar="PATH")
    sp.set_defaults(run=cmd_embed)

    sp = sub.add_parser("encode-n2c", help="encode a two-counter machine")
    sp.add_argument("--machine", help="machine file (INC/DEC/IFZ lines)")
    sp.add_argument("-b", type=int, default=0, help="recurring instruction label")
    sp.add_argument("--out-formula", metavar="PATH")
    sp.add_argument("--out-kripke", metavar="PATH")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(run=cmd_encode_n2c)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except CapabilityError as e:
        print(f"capability error: {e}", file=sys.stderr)
        return CAPABILITY
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
