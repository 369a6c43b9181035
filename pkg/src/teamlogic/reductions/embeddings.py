"""Embeddings of synchronous TeamLTL into the asynchronous logics.

The input is evaluated under the synchronous tef on a team T; the output
is evaluated on T_o, the same team with an alternating proposition o
added (see core_model.add_alternating_o).
"""

from __future__ import annotations

from ..formula import ast as A
from . import properties as P


class EmbeddingError(ValueError):
    pass


def _check_input(phi, o):
    if o in A.props(phi):
        raise EmbeddingError(f"formula already mentions {o!r}")
    if A.contains(phi, A.QUANTIFIERS + (A.SyncMacro,)):
        raise EmbeddingError("input must be quantifier-free")


def embed_sync_ltl_exists(phi, o="o", variant="synch_prime"):
    """phi & phi_synch' (or phi_synch with variant='synch').

    The primed variant is the default since it avoids Boolean disjunction
    and keeps the result in the plain existential fragment.
    """
    _check_input(phi, o)
    if variant not in ("synch", "synch_prime"):
        raise ValueError(f"unknown variant {variant!r}")
    theta = P.phi_synch(o) if variant == "synch" else P.phi_synch_prime(o)
    return A.And(phi, theta)


def embed_sync_ltl_forall(phi, o="o"):
    """phi OR F phi_off: every tef with a defect is excused.

    The disjunction is Boolean.  A split would have to hand a nonempty part
    to F phi_off, which no defect-free tef can satisfy, so the synchronous
    tef would always fail.
    """
    _check_input(phi, o)
    return A.BoolOr(phi, A.F(P.phi_off(o)))


def _is_f(f):
    return isinstance(f, A.Until) and isinstance(f.left, A.Top)


def _is_g(f):
    return isinstance(f, A.WUntil) and isinstance(f.right, A.Bottom)


def star_exists(phi, o="o"):
    d = A.Dep((), A.Prop(o))

    def tr(f):
        if _is_f(f):
            return A.Exists(A.Until(d, A.And(tr(f.right), d)))
        if _is_g(f):
            return A.Exists(A.WUntil(A.And(tr(f.left), d), A.BOT))
        if isinstance(f, A.Next):
            return A.Exists(A.Next(A.And(d, tr(f.sub))))
        if isinstance(f, (A.Until, A.WUntil)):
            return A.Exists(type(f)(A.And(tr(f.left), d), A.And(tr(f.right), d)))
        kids = A.children(f)
        return A.rebuild(f, tuple(tr(c) for c in kids)) if kids else f

    return tr(phi)


def star_forall(phi, o="o"):
    stuck = A.Incl((A.Prop(o),), (A.NegProp(o),))

    def tr(f):
        if _is_f(f):
            return A.Forall(A.Until(A.TOP, A.Or(tr(f.right), stuck)))
        if _is_g(f):
            return A.Forall(A.WUntil(tr(f.left), stuck))
        if isinstance(f, A.Next):
            return A.Forall(A.Next(A.Or(stuck, tr(f.sub))))
        if isinstance(f, (A.Until, A.WUntil)):
            return A.Forall(type(f)(tr(f.left), A.Or(tr(f.right), stuck)))
        kids = A.children(f)
        return A.rebuild(f, tuple(tr(c) for c in kids)) if kids else f

    return tr(phi)


def embed_sync_ctl(phi, variant="exists", o="o", fair=False):
    """Branching-time embedding with per-modality synchronisation.

    exists: phi* & G_E psi_synch (or o & G_E psi_synch' when fair=True).
    forall: phi* & o & G_A psi_synch''.
    """
    _check_input(phi, o)
    if variant == "exists":
        if fair:
            theta = A.And(A.Prop(o), A.Exists(A.G(P.psi_synch_prime(o))))
        else:
            theta = A.Exists(A.G(P.psi_synch(o)))
        return A.And(star_exists(phi, o), theta)
    if variant == "forall":
        return A.And(A.And(star_forall(phi, o), A.Prop(o)), A.Forall(A.G(P.psi_synch_pp(o))))
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------- synchronous modalities


def XS(phi, o="o"):
    return A.SyncMacro("XS", (phi,), o)


def US(phi, psi, o="o"):
    return A.SyncMacro("US", (phi, psi), o)


def GS(phi, o="o"):
    return A.SyncMacro("GS", (phi,), o)


def FS(phi, o="o"):
    return A.SyncMacro("FS", (phi,), o)


def sync_modal_macros():
    """Expander turning XS/US/GS/FS nodes into core syntax."""
    return A.expand_macros


# ---------------------------------------------------------------- fragments


def in_fragment(phi, fragment: str, allow=()) -> bool:
    """Syntactic membership in the target fragments of the embeddings.

    `allow` lists extra node classes permitted everywhere (for instance
    the atoms already present in the input formula).

    exists-ltl   : no quantifiers, no Boolean disjunction
    forall-ltl   : no quantifiers; Boolean disjunction and NE allowed
    exists-ctl   : every temporal operator directly under E, Boolean disjunction allowed
    forall-ctl   : every temporal operator directly under A, inclusion atoms allowed
    """
    from ..formula.parser import FormulaSyntaxError, check_ctl

    phi = A.expand_macros(phi)
    kinds = {type(f) for f in A.subformulas(phi)}
    base = {A.Prop, A.NegProp, A.Top, A.Bottom, A.And, A.Or, A.Next, A.Until, A.WUntil} | set(allow)
    if fragment == "exists-ltl":
        return kinds <= base
    if fragment == "forall-ltl":
        return kinds <= base | {A.BoolOr, A.NE}
    if fragment in ("exists-ctl", "forall-ctl"):
        q = A.Exists if fragment == "exists-ctl" else A.Forall
        extra = {A.BoolOr, A.Dep} if fragment == "exists-ctl" else {A.Incl}
        if not kinds <= base | extra | {q}:
            return False
        try:
            check_ctl(phi)
        except FormulaSyntaxError:
            return False
        return True
    raise ValueError(f"unknown fragment {fragment!r}")
