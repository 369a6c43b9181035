from .ast import *  # noqa: F401,F403
from .ast import Formula, GenTable, expand_macros, normalize_forall, quantifier_depth
from .bn import boolean_negation
from .closure import IndexedClosure, indexed_closure
from .parser import FormulaSyntaxError, load_tables, parse
from .printer import to_text
