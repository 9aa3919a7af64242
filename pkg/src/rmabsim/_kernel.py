"""Compiled episode loop.

Mirrors ``env.transition`` and the selection rules in ``policies``
operation for operation, so that it reproduces the pure-Python engine bit
for bit; ``tests/test_sim.py`` checks this.  The loop is resumable: all
mutable episode state lives in the arrays passed in, and each call
consumes one block of pre-drawn uniforms.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

PROPOSED, UCB1, DSEE, ORACLE = 0, 1, 2, 3

# slots of the integer scalar block
T, GRID_POS = 0, 1
# slots of the DSEE integer block
D_EXPLORING, D_K_EXPLORE, D_K_EXPLOIT, D_REMAINING, D_POSITION, D_EXPLORED, D_EXPLOIT_ARM = range(7)


@njit(cache=True, nogil=True)
def _argmax(values):
    best = 0
    for n in range(1, values.shape[0]):
        if values[n] > values[best]:
            best = n
    return best


@njit(cache=True, nogil=True)
def run_block(
    u,
    is_markov,
    p_idle,
    p10,
    p01,
    r_idle,
    r_busy,
    occupied,
    policy,
    dsee_d,
    dsee_log,
    oracle_arm,
    scal,
    counts,
    sums,
    comps,
    last,
    dsee_int,
    dsee_sums,
    dsee_counts,
    grid,
    counts_out,
    record_choices,
    choices_out,
    track,
    sens_out,
    sens_len,
):
    n_arms = counts.shape[0]
    cap = sens_out.shape[1]
    index = np.empty(n_arms)
    rewards = np.empty(n_arms)
    for row in range(u.shape[0]):
        t = scal[T]
        # restless dynamics: every band moves
        for n in range(n_arms):
            x = u[row, n]
            if is_markov[n]:
                if occupied[n]:
                    if x < p10[n]:
                        occupied[n] = False
                else:
                    if x < p01[n]:
                        occupied[n] = True
            else:
                occupied[n] = not (x < p_idle[n])
            rewards[n] = r_busy[n] if occupied[n] else r_idle[n]

        if policy == ORACLE:
            arm = oracle_arm
        elif policy == DSEE:
            if dsee_int[D_REMAINING] == 0:
                log_t = math.log(t)
                d = log_t if dsee_log else dsee_d
                if dsee_int[D_K_EXPLORE] == 0 or dsee_int[D_EXPLORED] < d * log_t:
                    dsee_int[D_EXPLORING] = 1
                    dsee_int[D_K_EXPLORE] += 1
                    dsee_int[D_REMAINING] = n_arms * 4 ** (dsee_int[D_K_EXPLORE] - 1)
                    dsee_int[D_POSITION] = 0
                else:
                    dsee_int[D_EXPLORING] = 0
                    dsee_int[D_K_EXPLOIT] += 1
                    dsee_int[D_REMAINING] = 2 * 4 ** (dsee_int[D_K_EXPLOIT] - 1)
                    for n in range(n_arms):
                        index[n] = dsee_sums[n] / dsee_counts[n] if dsee_counts[n] > 0 else 0.0
                    dsee_int[D_EXPLOIT_ARM] = _argmax(index)
            dsee_int[D_REMAINING] -= 1
            if dsee_int[D_EXPLORING]:
                arm = dsee_int[D_POSITION] % n_arms
                dsee_int[D_POSITION] += 1
                dsee_int[D_EXPLORED] += 1
            else:
                arm = dsee_int[D_EXPLOIT_ARM]
        elif t <= n_arms:
            arm = t - 1
        elif policy == PROPOSED:
            for n in range(n_arms):
                index[n] = (sums[n] + comps[n]) / counts[n] + math.sqrt(math.log(t / last[n]))
            arm = _argmax(index)
        else:
            log_t = math.log(t)
            for n in range(n_arms):
                index[n] = (sums[n] + comps[n]) / counts[n] + math.sqrt(2.0 * log_t / counts[n])
            arm = _argmax(index)

        reward = rewards[arm]
        if policy == DSEE and dsee_int[D_EXPLORING]:
            dsee_sums[arm] += reward
            dsee_counts[arm] += 1
        # Neumaier-compensated running sum
        s = sums[arm]
        total = s + reward
        if abs(s) >= abs(reward):
            comps[arm] += (s - total) + reward
        else:
            comps[arm] += (reward - total) + s
        sums[arm] = total
        counts[arm] += 1
        last[arm] = t

        if record_choices:
            choices_out[t - 1] = arm
        if track[arm] and sens_len[arm] < cap:
            sens_out[arm, sens_len[arm]] = t
        if track[arm]:
            sens_len[arm] += 1
        g = scal[GRID_POS]
        if g < grid.shape[0] and grid[g] == t:
            for n in range(n_arms):
                counts_out[g, n] = counts[n]
            scal[GRID_POS] = g + 1
        scal[T] = t + 1
