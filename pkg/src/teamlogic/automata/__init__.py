from .degeneralize import degeneralize
from .gaaba import Aaba, Gaaba, State, TestLeaf, build_gaaba, explicit_gaaba
from .game import (CapabilityError, GameArena, Scheduler, Verdict, accepts, membership_game, solve_buchi_game,
                   solve_generalized_buchi_game)
from .engine import automata_check
