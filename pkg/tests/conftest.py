import random
from fractions import Fraction

from stakeopt.game import GameSpec, Strategy


def random_strategy(rng: random.Random, goal: int) -> Strategy:
    """Uniformly random admissible stake table."""
    return Strategy(tuple(rng.randint(1, min(i, goal - i)) for i in range(1, goal)))


def random_spec(rng: random.Random, max_goal: int = 12) -> GameSpec:
    goal = rng.randint(2, max_goal)
    denom = rng.randint(2, 20)
    numer = rng.randint(1, denom - 1)
    return GameSpec(Fraction(numer, denom), goal)
