import random

from echlab.hf import validate
from echlab.samples import random_hfdata


def test_random_instances_are_valid():
    rng = random.Random(123)
    for _ in range(300):
        hf = random_hfdata(rng)
        rep = validate(hf)
        assert rep.ok, rep.violations
        assert len(hf.names) <= 6 and hf.max_exponent <= 2 and hf.p in (0, 2, 4, 8)


def test_instances_are_reproducible():
    a = random_hfdata(random.Random(5))
    b = random_hfdata(random.Random(5))
    assert a.differential == b.differential and a.grading == b.grading


def test_actions_requested():
    rng = random.Random(9)
    hits = sum(bool(random_hfdata(rng, with_action=True).h1_actions) for _ in range(50))
    assert hits > 10
