"""Timed automata with counters: exact semantics, region words, and inclusion checking.

Submodules:

* :mod:`tcnet.automata` - timed words, automata with a stack or counters, membership
* :mod:`tcnet.wqo` - the orders used for pruning
* :mod:`tcnet.regionwords` - the finite abstraction of joint configurations
* :mod:`tcnet.inclusion` - ``L(A) ⊆ L(B)`` for a timed automaton and a one-clock counter net
* :mod:`tcnet.mtl` - metric temporal logic on finite timed words
* :mod:`tcnet.channel` - channel machines, their encodings and generated automata
* :mod:`tcnet.formats`, :mod:`tcnet.cli` - file formats and the command line
"""
from .automata import Automaton, TimedWord, membership, validate
from .inclusion import BudgetExhausted, Verdict, check_inclusion, check_universality

__all__ = [
    "Automaton",
    "TimedWord",
    "membership",
    "validate",
    "check_inclusion",
    "check_universality",
    "Verdict",
    "BudgetExhausted",
]
__version__ = "0.1.0"
