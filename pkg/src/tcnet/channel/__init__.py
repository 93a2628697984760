"""Channel machines, timed-word encodings of their computations, and the automata built from them."""
from .machine import (
    EMPTY_TEST,
    ChannelConfig,
    ChannelError,
    ChannelMachine,
    ChannelStep,
    ReachResult,
    check_computation,
    faulty_successors,
    parse_label,
    reachable,
    receive,
    send,
    step_exact,
    step_faulty_check,
)
from .encoding import (
    HASH,
    MINUS,
    PLUS,
    STAR,
    Report,
    check_conditions,
    classify,
    encode_computation,
    encode_fragment,
    encoding_alphabet,
    infer_n,
    member_LC,
    member_Lef,
)
from .gadgets import (
    gadget_names,
    gen_complement_ta,
    gen_condition10_vonca,
    gen_exclusion_net,
    gen_universality_automaton,
)
from .corpus import TAGS, generate_corpus, mutate, random_computation, random_word

__all__ = [name for name in dir() if not name.startswith("_")]
