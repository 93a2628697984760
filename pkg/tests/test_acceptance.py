"""The acceptance suite: one test per criterion, each summarised as a PASS/FAIL line."""
import itertools
import random
from collections import Counter

import pytest

from tcnet.automata import TimedWord, membership, simulate
from tcnet.channel import (
    ChannelConfig,
    ChannelMachine,
    check_computation,
    check_conditions,
    classify,
    gen_complement_ta,
    gen_condition10_vonca,
    gen_exclusion_net,
    gen_universality_automaton,
    generate_corpus,
    member_LC,
    member_Lef,
    reachable,
    step_faulty_check,
)
from tcnet.fixtures import (
    automaton,
    counting_net,
    example_encoding_word,
    example_machine,
    inclusion_suite,
    joint_c2,
    joint_c3,
    joint_cmax,
    joint_w1,
)
from tcnet.inclusion import check_inclusion, check_universality
from tcnet.mtl import eval_at
from tcnet.regionwords import TOP, Item, RegionWord, dominated, encode, successors
from tcnet.wqo import embed_leq, subset_leq

from oracles import (
    brute_dominated,
    brute_embed,
    brute_subset,
    brute_subword,
    exact_effect,
    grid_successor_words,
    mtl_enumerate,
    perturb_equivalent,
    random_formula,
    random_joint,
    random_timed_word,
    reachable_words,
    region_fixtures,
    sample_accepted,
    words_up_to,
)

FIXTURES = region_fixtures()


@pytest.mark.criterion(1, "worked joint-configuration example")
def test_worked_region_example():
    w2 = encode(joint_c2(), joint_cmax)
    expected = RegionWord(
        zero={Item("B", "l1", "x", 1, (1, 1))},
        frac=(
            {Item("A", "l", "y", 1, (0, 0))},
            {Item("B", "l3", "x", 0, (0, 1))},
            {Item("B", "l2", "x", 0, (1, 1))},
        ),
        top={Item("B", "l1", "x", TOP, (0, 0))},
        cmax=2,
    )
    assert w2 == expected
    assert w2.render() == "{B:l1.x@1[1,1]}{A:l.y@1[0,0]}{B:l3.x@0[0,1]}{B:l2.x@0[1,1]}|{B:l1.x@T[0,0]}"
    assert encode(joint_c3(), joint_cmax) == w2
    assert dominated(joint_w1(), w2) and brute_dominated(joint_w1(), w2)
    assert not dominated(w2, joint_w1()) and not brute_dominated(w2, joint_w1())


@pytest.mark.criterion(2, "exclusion-net counter replay on the example encoding")
def test_exclusion_net_replay():
    net = gen_exclusion_net(example_machine())
    w = example_encoding_word()
    layers = simulate(net, w)
    letters = w.letters
    live = [layer for layer in layers[1:] if layer]
    assert all(len(layer) == 1 for layer in live)
    heights = [len(next(iter(layer)).store) for layer in live]
    assert heights[:3] == [1, 2, 3]
    at_final = letters.index("sF")
    assert heights[at_final:at_final + 4] == [3, 2, 1, 0]
    assert letters[at_final + 4] == "*" and not layers[at_final + 5]
    assert not membership(net, w).accepted


@pytest.mark.criterion(3, "example encoding: in L(C,2), not error-free")
def test_example_word_classification():
    c = example_machine()
    w = example_encoding_word()
    assert check_conditions(w, c, 2).ok and member_LC(w, c)
    assert not member_Lef(w, c) and "10" in classify(w, c, 2)
    assert membership(gen_condition10_vonca(c), w).accepted
    assert not membership(gen_exclusion_net(c), w).accepted


@pytest.mark.criterion(4, "equivalent configurations have equal successor encodings")
def test_equivalent_configurations():
    rng = random.Random(4)
    checked = 0
    for k, (name, a, b, cmax) in enumerate(FIXTURES):
        for _ in range(67 if k < 2 else 66):
            c1 = random_joint(rng, a, b, cmax)
            c2 = perturb_equivalent(c1, rng, cmax)
            assert encode(c1, cmax) == encode(c2, cmax)
            for letter in sorted(a.alphabet.letters):
                assert grid_successor_words(c1, letter, a, b, cmax) == grid_successor_words(c2, letter, a, b, cmax), (
                    name, c1, c2, letter)
            checked += 1
    assert checked == 200


@pytest.mark.criterion(5, "domination is preserved by successors on reachable words")
def test_domination_monotone():
    rng = random.Random(5)
    pool = []
    for name, a, b, cmax in FIXTURES:
        words = reachable_words(a, b, cmax, 5)
        pool += [(a, b, w1, w2) for w1 in words for w2 in words if w1 != w2 and dominated(w1, w2)]
    assert len(pool) >= 200
    for a, b, w1, w2 in rng.sample(pool, 200):
        for letter in sorted(a.alphabet.letters):
            below = successors(w1, letter, a, b)
            for t2 in successors(w2, letter, a, b):
                assert any(dominated(t1, t2) for t1 in below), (w1.render(), w2.render(), letter, t2.render())


@pytest.mark.criterion(6, "abstract successors equal the concrete delay-grid oracle")
def test_abstraction_oracle():
    rng = random.Random(6)
    for name, a, b, cmax in FIXTURES:
        for _ in range(100):
            c = random_joint(rng, a, b, cmax)
            w = encode(c, cmax)
            for letter in sorted(a.alphabet.letters):
                assert successors(w, letter, a, b) == grid_successor_words(c, letter, a, b, cmax), (
                    name, c, letter)


def _base_leq(u, v):
    # 0 below everything, 1 and 2 incomparable
    return u == v or u == 0


def _item_leq(p, q):
    return p[0] == q[0] and p[1] <= q[1]


@pytest.mark.criterion(7, "sequence embedding and set matching agree with exhaustive search")
def test_wqo_exhaustive():
    leq = embed_leq(_base_leq)
    words = [w for n in range(7) for w in itertools.product((0, 1, 2), repeat=n)]
    for s in words:
        for t in words:
            expected = len(s) <= len(t) and brute_embed(s, t, _base_leq)
            assert leq(s, t) == expected, (s, t)
    base = [(tag, level) for tag in "pq" for level in range(3)] + [("r", 0)]
    sets = [frozenset(c) for n in range(6) for c in itertools.combinations(base, n)]
    sleq = subset_leq(_item_leq)
    for a1 in sets:
        for a2 in sets:
            assert sleq(a1, a2) == brute_subset(a1, a2, _item_leq), (a1, a2)


@pytest.mark.criterion(8, "inclusion verdicts, verified witnesses, sampled inclusions")
def test_inclusion_end_to_end():
    suite = inclusion_suite()
    assert len(suite) >= 10
    rng = random.Random(8)
    for case in suite:
        v = check_inclusion(case.a, case.b)
        assert v.included == case.included, case.name
        if v.included:
            sample = sample_accepted(case.a, rng, 1000)
            assert len(sample) == 1000, case.name
            rejected = [w for w in sample if not membership(case.b, w).accepted]
            assert not rejected, (case.name, rejected[:3])
        else:
            assert membership(case.a, v.witness).accepted, case.name
            assert not membership(case.b, v.witness).accepted, case.name


@pytest.mark.criterion(9, "universality of counter nets")
def test_universality():
    universal = automaton("ab", {"u"}, {"u"}, {"u"}, (), [("u", "a", "", (), "u"), ("u", "b", "", (), "u")],
                          dimension=0)
    assert check_universality(universal).included
    blocking = automaton("ab", {"u"}, {"u"}, {"u"}, (), [("u", "a", "", (), "u", (-1,)), ("u", "b", "", (), "u", (0,))],
                         dimension=1)
    for net in (counting_net(), blocking):
        v = check_universality(net)
        assert not v.included
        assert not membership(net, v.witness).accepted


@pytest.mark.criterion(10, "gadget automata agree with the condition checker on a 500-word corpus")
def test_gadget_equivalence():
    c = example_machine()
    corpus = generate_corpus(c, size=500, seed=0)
    tags = Counter(tag for tag, _ in corpus)
    assert len(corpus) == 500 and tags["mutant"] and tags["random"] and tags["valid-faulty"]
    complement = gen_complement_ta(c)
    universality = gen_universality_automaton(c)
    mismatches = []
    for tag, w in corpus:
        if membership(complement, w).accepted == member_LC(w, c):
            mismatches.append(("complement", tag, str(w)))
        if membership(universality, w).accepted == member_Lef(w, c):
            mismatches.append(("universality", tag, str(w)))
    assert not mismatches, mismatches[:3]


@pytest.mark.criterion(11, "bounded channel reachability")
def test_channel_reachability():
    c = example_machine()
    assert not reachable(c, "sF", "exact", 5, 50).found
    found = reachable(c, "sF", "faulty", 3, 10)
    assert found.found and found.computation[-1].target.state == "sF"
    assert found.computation[0].source == ChannelConfig("sI", ())
    assert all(step_faulty_check(c, s.source, s.label, s.target) for s in found.computation)
    assert check_computation(c, found.computation)


@pytest.mark.criterion(12, "insertion-error steps match their definition")
def test_insertion_error_characterisation():
    messages = ("m1", "m2", "m3")
    labels = ["empty?"] + [f"!{m}" for m in messages] + [f"?{m}" for m in messages]
    c = ChannelMachine({"i", "p", "q", "r"}, "i", set(messages),
                       {("i", "empty?", "p")} | {("p", label, "q") for label in labels})
    channels = list(words_up_to(messages, 4))
    longer = list(words_up_to(messages, 5))
    up = {x1: [x for x in longer if brute_subword(x1, x)] for x1 in channels}
    down = {x2: [x for x in channels if brute_subword(x, x2)] for x2 in channels}
    for label in labels:
        effects = {x1: {exact_effect(label, x) for x in up[x1]} - {None} for x1 in channels}
        for s1, s2 in (("p", "q"), ("p", "r"), ("q", "p")):
            fires = (s1, label, s2) in c.transitions
            for x1 in channels:
                for x2 in channels:
                    expected = fires and any(x in effects[x1] for x in down[x2])
                    got = step_faulty_check(c, ChannelConfig(s1, x1), label, ChannelConfig(s2, x2))
                    assert got == expected, (s1, x1, label, s2, x2)


@pytest.mark.criterion(13, "MTL evaluation agrees with quantifier enumeration")
def test_mtl_oracle():
    rng = random.Random(13)
    for _ in range(1000):
        w = random_timed_word(rng, "abc", max_len=6)
        phi = random_formula(rng, "abc", 4)
        i = rng.randint(1, len(w))
        assert eval_at(w, i, phi) == mtl_enumerate(w, i, phi), (str(w), str(phi), i)
