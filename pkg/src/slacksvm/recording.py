"""Run metrics: time series of learning progress against kernel-eval cost."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple


class Sample(NamedTuple):
    iteration: int
    train_kernel_evals: int
    eval_kernel_evals: int
    empirical_hinge: float
    test_zero_one: float
    wall_clock_ns: int


@dataclass
class RunRecord:
    """Per-run metadata plus samples ordered by iteration.

    Training and evaluation kernel counters are tracked separately so that
    held-out measurements never pollute the training cost axis.
    """

    metadata: dict = field(default_factory=dict)
    samples: list = field(default_factory=list)

    def add(self, *args, **kwargs):
        self.samples.append(Sample(*args, **kwargs))


def geometric_schedule(iterations: int) -> set:
    """Iterations 1, 2, 4, ... plus the final one (log-axis point density)."""
    sched = set()
    t = 1
    while t <= iterations:
        sched.add(t)
        t *= 2
    sched.add(iterations)
    return sched
