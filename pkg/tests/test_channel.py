import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tcnet.automata import TimedWord, membership, validate
from tcnet.channel import (
    ChannelConfig,
    ChannelError,
    ChannelMachine,
    ChannelStep,
    check_computation,
    check_conditions,
    classify,
    encode_computation,
    encode_fragment,
    gen_complement_ta,
    gen_condition10_vonca,
    gen_exclusion_net,
    gen_universality_automaton,
    generate_corpus,
    member_LC,
    member_Lef,
    random_computation,
    reachable,
    step_exact,
    step_faulty_check,
)
from tcnet.fixtures import (
    example_encoding_word,
    example_machine,
    example_machine_reachable,
    faulty_computation,
    wildcard_steps,
)

C = example_machine()


def cfg(state, *msgs):
    return ChannelConfig(state, tuple(msgs))


def test_machine_shape_rules():
    with pytest.raises(ChannelError):
        ChannelMachine({"sI", "s"}, "sI", {"m"}, {("sI", "!m", "s")})
    with pytest.raises(ChannelError):
        ChannelMachine({"sI", "s"}, "sI", {"m"}, {("sI", "empty?", "s"), ("s", "empty?", "sI")})


def test_exact_steps():
    assert step_exact(C, cfg("s"), "!m1") == {cfg("s", "m1")}
    assert step_exact(C, cfg("sI"), "empty?") == {cfg("s")}
    assert step_exact(C, cfg("s'", "m2"), "?m1") == set()


def test_faulty_steps():
    assert step_faulty_check(C, cfg("s'", "m1", "m2"), "?m1", cfg("s'", "m3", "m2"))
    assert not step_faulty_check(C, cfg("s'", "m1", "m2"), "?m1", cfg("s'", "m1"))
    loop = ChannelMachine({"sI", "s", "s'"}, "sI", {"m1"}, {("sI", "empty?", "s"), ("s", "empty?", "s'")})
    assert step_faulty_check(loop, cfg("s"), "empty?", cfg("s'", "m1", "m1"))


def test_exact_steps_are_faulty_steps():
    rng = random.Random(5)
    for _ in range(300):
        x = tuple(rng.choice(("m1", "m2", "m3")) for _ in range(rng.randint(0, 3)))
        for state in sorted(C.states):
            for label in sorted(C.labels):
                for nxt in step_exact(C, cfg(state, *x), label):
                    assert step_faulty_check(C, cfg(state, *x), label, nxt)


def test_faulty_computation_checks():
    steps = faulty_computation()
    assert check_computation(C, steps)
    assert not check_computation(C, steps, exact=True)


def test_reachability():
    assert not reachable(C, "sF", "exact", 5, 50).found
    found = reachable(C, "sF", "faulty", 3, 10)
    assert found.found and check_computation(C, found.computation)
    assert reachable(C, "sI").computation == ()
    assert reachable(example_machine_reachable(), "sF", "exact", 5, 50).found


def test_example_word_conditions():
    w = example_encoding_word()
    assert check_conditions(w, C, 2).ok
    assert member_LC(w, C)
    assert not member_Lef(w, C)
    assert "10" in classify(w, C)


def test_mutated_words_are_caught():
    w = example_encoding_word()
    no_test = TimedWord(tuple(e for e in w.events if e[0] != "empty?"))
    assert not check_conditions(no_test, C, 2).ok
    tie = TimedWord((w.events[0], ("+", w.events[0][1])) + w.events[2:])
    assert "1" in check_conditions(tie, C, 2)
    late = TimedWord((("s", Fraction(1)),) + w.events[1:])
    assert not member_LC(late, C) and not member_Lef(late, C)


def test_wildcard_fragment():
    w = encode_fragment(C, wildcard_steps(), 4, 1)
    assert " ".join(a for a, _ in w) == "s m1 m1 # # !m2 s' m1 m1 m2 # ?m1 s' m1 m2 # #"


def test_error_free_encoding_is_in_both_languages():
    loop = ChannelMachine({"sI", "s", "sF"}, "sI", {"m"},
                          {("sI", "empty?", "s"), ("s", "empty?", "s"), ("s", "empty?", "sF")}, "sF")
    steps = [ChannelStep(cfg("sI"), "empty?", cfg("s")), ChannelStep(cfg("s"), "empty?", cfg("sF"))]
    w = encode_computation(loop, steps, 2)
    assert check_conditions(w, loop, 2).ok
    assert member_Lef(w, loop)
    assert [a for a, _ in w][:4] == ["sI", "+", "+", "empty?"]


@settings(max_examples=60, deadline=None)
@given(st.randoms(use_true_random=False))
def test_encodings_satisfy_the_conditions(rng):
    c = example_machine_reachable()
    steps = random_computation(c, rng, faulty=rng.random() < 0.5)
    if steps is None:
        return
    longest = max(len(x.channel) for s in steps for x in (s.source, s.target))
    n = longest + rng.randint(0, 2)
    w = encode_computation(c, steps, n, Fraction(rng.randint(0, 4), 2))
    assert check_conditions(w, c, n).ok
    assert member_LC(w, c)
    if check_computation(c, steps, exact=True):
        assert member_Lef(w, c)


def test_encoder_preconditions():
    with pytest.raises(ChannelError):
        encode_computation(C, faulty_computation()[1:], 2)
    with pytest.raises(ChannelError):
        encode_computation(C, faulty_computation(), 1)


def test_gadget_classes():
    net = gen_exclusion_net(C)
    r = validate(net)
    assert r.is_deterministic_clockless_visibly_net and r.is_one_counter
    assert validate(gen_complement_ta(C)).is_timed_automaton
    assert validate(gen_complement_ta(C)).is_one_clock
    r10 = validate(gen_condition10_vonca(C))
    assert r10.is_visibly and r10.is_one_counter and not r10.is_counter_net
    ru = validate(gen_universality_automaton(C))
    assert ru.is_visibly and ru.is_one_clock


def test_gadgets_on_the_example_word():
    w = example_encoding_word()
    assert not membership(gen_exclusion_net(C), w).accepted
    assert membership(gen_condition10_vonca(C), w).accepted
    assert not membership(gen_complement_ta(C), w).accepted
    assert membership(gen_universality_automaton(C), w).accepted


def test_corpus_is_deterministic():
    first = generate_corpus(C, size=40, seed=7)
    assert first == generate_corpus(C, size=40, seed=7)
    assert len(first) == 40
    assert first != generate_corpus(C, size=40, seed=8)
