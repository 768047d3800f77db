import random

import pytest
from hypothesis import given, settings, strategies as st

from omegazoo.automaton import AutomatonError, Lasso
from omegazoo.references import REFERENCE_KEYS, reference
from omegazoo.sampling import random_in_language, random_lasso
from omegazoo.zoo import zoo


def test_member_examples():
    assert not reference("lstrong").member_text(":y")
    assert reference("lstrong").member_text(":x a x b x b y")
    assert not reference("lstrong").member_text(":x a x a y")


def test_stray_letters_separate_the_literal_strong_language():
    w = ":x b a x a x a y"
    assert reference("lstrong").member_text(w)
    assert not reference("lstrong_literal").member_text(w)


@pytest.mark.parametrize("key", REFERENCE_KEYS)
def test_sampler_stays_in_language(key):
    ref = reference(key)
    rng = random.Random(3)
    assert all(ref.member(random_in_language(ref, rng)) for _ in range(50))


@settings(max_examples=60)
@given(st.integers(0, 10_000), st.sampled_from(["lmain", "lstrong", "lweak"]))
def test_prefix_independence_spot_check(seed, key):
    ref = reference(key)
    rng = random.Random(seed)
    w = random_in_language(ref, rng) if rng.random() < 0.5 else random_lasso(ref.alphabet, rng, 16)
    junk = tuple(rng.randrange(len(ref.alphabet)) for _ in range(rng.randint(1, 5)))
    assert ref.member(w) == ref.member(Lasso(junk + w.prefix, w.period))
    assert ref.member(w) == ref.member(Lasso(w.prefix + w.period, w.period))


def test_main_language_agrees_with_amain_on_samples():
    a, ref = zoo("amain"), reference("lmain")
    from omegazoo.omega import lasso_accepts
    rng = random.Random(11)
    for _ in range(200):
        w = random_in_language(ref, rng) if rng.random() < 0.5 else random_lasso(a.alphabet, rng, 25)
        assert lasso_accepts(a, w) == ref.member(w)


def test_unknown_reference():
    with pytest.raises(AutomatonError):
        reference("nope")
