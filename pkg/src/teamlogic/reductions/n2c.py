"""Encoding recurring computations of two-counter machines.

encode_n2c(m, b) builds a Kripke structure K and a formula phi such that
the traces of K satisfy phi existentially iff m has a computation visiting
instruction b infinitely often.  Nothing here runs the (undecidable)
instance; the construction is exposed for inspection and export.

Proposition names:
    ptop            every non-dummy state after the root
    p_l1 .. p_r2    trace type markers, q_l1 .. q_r2 identification markers
    tl, tr          left / right counter trace pairs
    hash, c         interval separator and counter unit
    box, bbox       markers of the one-interval desynchronisation gadget
    i0 .. i{n-1}    instruction labels (on hash states)
    o               alternation
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core_model import KripkeStructure
from ..formula import ast as A
from .embeddings import GS, US, XS

TYPES = ("l1", "l2", "r1", "r2")
KINDS = ("inc", "dec", "ifz")


class MachineError(ValueError):
    pass


@dataclass(frozen=True)
class Instruction:
    kind: str  # inc, dec, ifz
    counter: str  # L or R
    targets: tuple  # (j, j'); for ifz (then, else)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise MachineError(f"unknown instruction kind {self.kind!r}")
        if self.counter not in ("L", "R"):
            raise MachineError(f"unknown counter {self.counter!r}")
        if len(self.targets) not in (1, 2):
            raise MachineError("an instruction has one or two targets")
        if self.kind == "ifz" and len(self.targets) != 2:
            raise MachineError("a zero test needs a then and an else target")

    def __str__(self):
        j = self.targets + self.targets[-1:] if len(self.targets) == 1 else self.targets
        return f"{self.kind.upper()} {self.counter} {j[0]} {j[1]}"


@dataclass(frozen=True)
class CounterMachine:
    instructions: tuple

    def __post_init__(self):
        ins = tuple(self.instructions)
        object.__setattr__(self, "instructions", ins)
        if not ins:
            raise MachineError("a machine needs at least one instruction")
        for i, inst in enumerate(ins):
            for j in inst.targets:
                if not 0 <= j < len(ins):
                    raise MachineError(f"instruction {i} jumps to missing label {j}")

    def __len__(self):
        return len(self.instructions)

    def successors(self, config):
        """Configurations reachable in one step from (i, left, right)."""
        i, cl, cr = config
        inst = self.instructions[i]
        val = cl if inst.counter == "L" else cr

        def put(v):
            return (v, cr) if inst.counter == "L" else (cl, v)

        if inst.kind == "ifz":
            j = inst.targets[0] if val == 0 else inst.targets[1]
            return [(j, cl, cr)]
        if inst.kind == "dec" and val == 0:
            return []
        v = val + 1 if inst.kind == "inc" else val - 1
        return [(j,) + put(v) for j in dict.fromkeys(inst.targets)]

    def to_text(self) -> str:
        return "".join(str(inst) + "\n" for inst in self.instructions)


def parse_machine(text: str) -> CounterMachine:
    """One instruction per line: `INC L 2 5`, `DEC R 0 0`, `IFZ L 3 4`."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0].upper() not in ("INC", "DEC", "IFZ"):
            raise MachineError(f"line {lineno}: expected `OP COUNTER J J'`, got {raw.strip()!r}")
        try:
            targets = (int(parts[2]), int(parts[3]))
        except ValueError:
            raise MachineError(f"line {lineno}: targets must be integers") from None
        out.append(Instruction(parts[0].lower(), parts[1].upper(), targets))
    return CounterMachine(tuple(out))


# ---------------------------------------------------------------- formula


def _p(name):
    return A.Prop(name)


def _n(name):
    return A.NegProp(name)


def _dep(name):
    return A.Dep((), A.Prop(name))


def label(i) -> str:
    return f"i{i}"


def only_formulas(n: int) -> list:
    """only(j) = i_j & (not i_0 & ... & not i_{j-1}) & (not i_{j+1} & ... ).

    The two negated blocks are shared prefix / suffix chains, so all n
    formulas together have linearly many distinct subformulas.
    """
    pre = [A.TOP]
    for j in range(n - 1):
        pre.append(A.And(pre[-1], _n(label(j))))
    suf = [A.TOP] * n
    for j in range(n - 2, -1, -1):
        suf[j] = A.And(_n(label(j + 1)), suf[j + 1])
    return [A.And(_p(label(j)), A.And(pre[j], suf[j])) for j in range(n)]


def _jump(j):
    """[!hash U_E hash & j] with j a label formula."""
    return A.Exists(A.Until(_n("hash"), A.And(_p("hash"), j)))


def _halt():
    return XS(US(A.And(_dep("c"), _n("hash")), _p("hash")))


def _other(s):
    return "tr" if s == "L" else "tl"


def _types(s):
    k = s.lower()
    return f"{k}1", f"{k}2"


def counter_inc(s):
    t1, t2 = _types(s)
    a = A.And(_p(f"p_{t2}"), _n("c"))
    b = A.And(A.And(_p(f"p_{t1}"), _p("c")), XS(_n("c")))
    return A.Or(XS(US(_p("c"), A.Or(a, b))), A.And(_halt(), _p(_other(s))))


def counter_dec(s):
    t1, t2 = _types(s)
    a = A.And(A.And(_p(f"p_{t2}"), _p("c")), XS(_n("c")))
    b = A.And(_p(f"p_{t1}"), _n("c"))
    return A.Or(XS(US(_p("c"), A.Or(a, b))), A.And(_halt(), _p(_other(s))))


def theta(inst: Instruction):
    j = inst.targets[0]
    j2 = inst.targets[1] if len(inst.targets) > 1 else j
    if inst.kind in ("inc", "dec"):
        op = counter_inc(inst.counter) if inst.kind == "inc" else counter_dec(inst.counter)
        return A.And(op, XS(_jump(A.BoolOr(_p(label(j)), _p(label(j2))))))
    _, t2 = _types(inst.counter)
    q = f"q_{t2}"
    zero = A.And(A.Or(A.And(_p(q), _n("c")), _n(q)), _jump(_p(label(j))))
    nonzero = A.And(A.Or(A.And(_p(q), _p("c")), _n(q)), _jump(_p(label(j2))))
    return A.And(XS(A.BoolOr(zero, nonzero)), _halt())


def theta_valid(m: CounterMachine):
    only = only_formulas(len(m))
    body = A.bor(*(A.And(only[i], theta(inst)) for i, inst in enumerate(m.instructions)))
    step = A.Or(A.And(_p("hash"), body), _n("hash"))
    return A.Exists(A.G(A.And(_dep("hash"), step)))


def theta_brec(b: int):
    return A.Exists(A.G(A.Exists(A.F(_p(label(b))))))


def phi_single(names):
    return GS(A.conj(*(_dep(x) for x in names)))


def phi_struc(m: CounterMachine):
    single = phi_single(["hash", "c"] + [label(i) for i in range(len(m))])
    ident = A.conj(*(A.Exists(A.Next(_p(f"q_{t}"))) for t in TYPES))
    groups = A.Or(A.Or(A.And(_p("tl"), single), A.And(_p("tr"), single)), _n("ptop"))
    return A.And(ident, groups)


def phi_comp(m: CounterMachine, b: int):
    desync = A.Exists(A.Until(_p("box"), A.And(_p("bbox"), theta_valid(m))))
    return A.Or(_n("ptop"), A.conj(desync, theta_brec(b), _p(label(0))))


def phi_ib(m: CounterMachine, b: int):
    return XS(A.Or(_p("ptop"), A.And(phi_struc(m), XS(XS(phi_comp(m, b))))))


# ---------------------------------------------------------------- structure


def kripke_structure(m: CounterMachine) -> KripkeStructure:
    """Five parts below a common root: four trace types and a dummy.

    A typed part runs root -> id1 -> id2 -> first hash, then an arbitrary
    sequence of hash-separated intervals (c states followed by blank
    states).  In the l1/r1 parts the first interval is marked box and the
    second hash bbox; in l2/r2 the first hash carries both markers.
    Every state is paired with a parity bit so o alternates along every
    path, the root having o.
    """
    n = len(m)
    base_labels = {"root": frozenset()}
    edges = {"root": []}

    def add(name, labels, succ):
        base_labels[name] = frozenset(labels)
        edges[name] = list(succ)

    for t in TYPES:
        common = {"ptop", f"p_{t}", "tl" if t[0] == "l" else "tr"}
        ahead = t.endswith("1")
        first = "F" if ahead else "R"  # region entered after the first hash
        edges["root"].append(f"{t}.id1")
        add(f"{t}.id1", common | {f"q_{u}" for u in TYPES if u != t}, [f"{t}.id2"])
        add(f"{t}.id2", common | {f"q_{t}"}, [f"{t}.H0.{i}" for i in range(n)])
        for i in range(n):
            marks = {"box"} if ahead else {"box", "bbox"}
            add(f"{t}.H0.{i}", common | marks | {"hash", label(i)}, _interval(t, first, n))
        if ahead:
            add(f"{t}.F.c", common | {"box", "c"}, [f"{t}.F.c", f"{t}.F.e"] + [f"{t}.H1.{j}" for j in range(n)])
            add(f"{t}.F.e", common | {"box"}, [f"{t}.F.e"] + [f"{t}.H1.{j}" for j in range(n)])
            for j in range(n):
                add(f"{t}.H1.{j}", common | {"bbox", "hash", label(j)}, _interval(t, "R", n))
        add(f"{t}.R.c", common | {"c"}, [f"{t}.R.c", f"{t}.R.e"] + [f"{t}.R.h{j}" for j in range(n)])
        add(f"{t}.R.e", common, [f"{t}.R.e"] + [f"{t}.R.h{j}" for j in range(n)])
        for j in range(n):
            add(f"{t}.R.h{j}", common | {"hash", label(j)}, _interval(t, "R", n))
    edges["root"].append("dummy")
    add("dummy", {f"q_{t}" for t in TYPES}, ["dummy"])

    def name(s, parity):
        return f"{s}/{parity}"

    states, labels, out = [], {}, {}
    for s in base_labels:
        for parity in (0, 1):
            v = name(s, parity)
            states.append(v)
            labels[v] = base_labels[s] | ({"o"} if parity == 0 else set())
            out[v] = [name(w, 1 - parity) for w in edges[s]]
    root = name("root", 0)
    # keep only states reachable from the root
    seen, todo = {root}, [root]
    while todo:
        v = todo.pop()
        for w in out[v]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    states = [v for v in states if v in seen]
    return KripkeStructure(tuple(states), {v: out[v] for v in states}, {v: labels[v] for v in states}, root)


def _interval(t, region, n):
    """Successors of a hash state: c states, blank states or the next hash."""
    nxt = [f"{t}.H1.{j}" for j in range(n)] if region == "F" else [f"{t}.R.h{j}" for j in range(n)]
    return [f"{t}.{region}.c", f"{t}.{region}.e"] + nxt


@dataclass(frozen=True)
class N2cEncoding:
    structure: KripkeStructure
    formula: A.Formula
    label: int
    machine: CounterMachine

    @property
    def size(self) -> int:
        return encoding_size(self.formula)


def encoding_size(phi) -> int:
    """Distinct compound subformulas plus distinct propositions.

    A literal counts with its proposition (polarity is a flag on the
    leaf), and synchronous macros count as single nodes.  Tree size is not
    a useful measure here: the only(j) blocks alone are quadratic in
    the number of instructions when written out as trees.
    """
    literals = (A.Prop, A.NegProp)
    seen = set()

    def walk(f):
        if f in seen:
            return
        seen.add(f)
        for c in A.children(f) + A.atom_params(f):
            walk(c)

    walk(phi)
    compound = sum(1 for f in seen if not isinstance(f, literals))
    return compound + len(A.props(phi))


def encode_n2c(m: CounterMachine, b: int) -> N2cEncoding:
    if not 0 <= b < len(m):
        raise MachineError(f"label {b} is not an instruction of a {len(m)}-line machine")
    return N2cEncoding(kripke_structure(m), phi_ib(m, b), b, m)


def cycle_machine(n: int, kind="inc", counter="L") -> CounterMachine:
    """n instructions of one kind, instruction i jumping to i+1 and i+2 (mod n)."""
    return CounterMachine(tuple(Instruction(kind, counter, ((i + 1) % n, (i + 2) % n)) for i in range(n)))


def bounded_run(m: CounterMachine, steps: int, start=(0, 0, 0)):
    """All configuration sequences of the given length (for small demos)."""
    runs = [[start]]
    for _ in range(steps):
        runs = [r + [c] for r in runs for c in m.successors(r[-1])]
    return runs


__all__ = ["Instruction", "CounterMachine", "parse_machine", "N2cEncoding", "encode_n2c", "encoding_size", "only_formulas",
           "theta", "theta_valid", "theta_brec", "phi_single", "phi_struc", "phi_comp", "phi_ib",
           "kripke_structure", "cycle_machine", "bounded_run", "MachineError"]
