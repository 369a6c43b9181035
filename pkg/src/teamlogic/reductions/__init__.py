from .embeddings import (EmbeddingError, FS, GS, US, XS, embed_sync_ctl, embed_sync_ltl_exists,
                         embed_sync_ltl_forall, in_fragment, sync_modal_macros)
from .n2c import CounterMachine, Instruction, MachineError, N2cEncoding, encode_n2c, parse_machine
from .properties import tef_property_formulas
