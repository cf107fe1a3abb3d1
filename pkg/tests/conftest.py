"""Shared fixtures: random pattern builders and an independent engine oracle."""

from __future__ import annotations

import numpy as np

from edmkit import DemandPattern

_ACCEPTANCE_RESULTS: dict[int, tuple[str, bool]] = {}


def random_pattern(rng: np.random.Generator, n: int, tau_s: int = 1,
                   max_w: float = 1500.0, start_s: int = 0) -> DemandPattern:
    """Piecewise-constant random pattern: random levels held for random runs."""
    powers: list[float] = []
    while len(powers) < n:
        level = float(rng.uniform(0.0, max_w))
        run = int(rng.integers(1, 8))
        powers.extend([level] * run)
    return DemandPattern(tau_s=tau_s, powers_w=tuple(powers[:n]), start_s=start_s)


def brute_force_edm(powers, tau_s, delta1_w, delta2_ws, billing_period_s, start_s=0):
    """Batch reference for the streaming engine, written independently.

    Recomputes the accumulated deviation and segment energy from scratch at
    every interval instead of carrying running state.  Returns
    (t_end_s, energy_ws, trigger-token frozenset) triples.
    """
    events = []
    seg_start = 0  # index of the first interval after the previous event
    p_ref = None
    for k, p in enumerate(powers):
        t_end = start_s + (k + 1) * tau_s
        triggers = set()
        if k > 0:
            if abs(p - powers[k - 1]) > delta1_w:
                triggers.add("D1")
            acc = 0.0
            for j in range(seg_start, k + 1):
                acc += (powers[j] - p_ref) * tau_s
            if abs(acc) > delta2_ws:
                triggers.add("D2")
        if (t_end - start_s) % billing_period_s == 0 or k == len(powers) - 1:
            triggers.add("BILL")
        if triggers:
            energy = 0.0
            for j in range(seg_start, k + 1):
                energy += powers[j] * tau_s
            events.append((t_end, energy, frozenset(triggers)))
            seg_start = k + 1
            p_ref = p
        elif p_ref is None:
            p_ref = p
    return events


def record_acceptance(num: int, description: str) -> None:
    """Mark an acceptance criterion as passed; the terminal summary prints it."""
    _ACCEPTANCE_RESULTS[num] = (description, True)


def register_acceptance(num: int, description: str) -> None:
    """Pre-register a criterion so a failing test still produces a FAIL line."""
    if num not in _ACCEPTANCE_RESULTS:
        _ACCEPTANCE_RESULTS[num] = (description, False)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE_RESULTS):
        description, passed = _ACCEPTANCE_RESULTS[num]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {verdict} - {description}")
