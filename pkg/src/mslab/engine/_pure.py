"""Pure-Python discrete-event simulation kernel.

Semantics are shared bit-for-bit with the compiled twin in ``_core.pyx``:
identical arithmetic order, identical tie-breaking (lowest directed-edge id,
then lowest start index, threads assigned lowest-id first), identical event
ordering (completion time, then scheduling sequence number).

Opposite directions of one edge may be tracked concurrently, so a
correspondence can arrive from the reverse side while a task is still in
flight. Such a task no longer carries information: it is dropped from the
effective in-flight count, its eventual success adds no pair (counted as
redundant), and a start whose correspondence becomes known is scrubbed from
the failure set.
"""
from __future__ import annotations

import heapq

STATUS_SATURATED = 0
STATUS_EXHAUSTED = 1
STATUS_BUDGET = 2

POT_GREEDY = 0
POT_ORDINAL = 1
POT_WEIGHTED = 2
POT_WEIGHTED_INF = 3


def run_kernel(d, n_nodes, tails, heads, images, flags, durations,
               k, pot_code, lam, dynamic_norm, order_rank,
               seed_node, seed_sol, budget, alpha):
    def _as_nested_lists(a):
        return a.tolist() if hasattr(a, "tolist") else [list(r) for r in a]

    n_dedges = len(tails)
    images = _as_nested_lists(images)
    flags = _as_nested_lists(flags)
    durations = _as_nested_lists(durations)
    tails = tails.tolist() if hasattr(tails, "tolist") else list(tails)
    heads = heads.tolist() if hasattr(heads, "tolist") else list(heads)
    order_rank = (order_rank.tolist() if hasattr(order_rank, "tolist")
                  else list(order_rank))

    q_count = [0] * n_nodes
    q_member = [bytearray(d) for _ in range(n_nodes)]
    q_order = [[] for _ in range(n_nodes)]
    c_count = [0] * (n_dedges // 2)
    c_pairs = []
    f_member = [bytearray(d) for _ in range(n_dedges)]
    matched = [bytearray(d) for _ in range(n_dedges)]
    infl = [bytearray(d) for _ in range(n_dedges)]
    avail = [bytearray(d) for _ in range(n_dedges)]
    avail_cnt = [0] * n_dedges
    avail_min = [d] * n_dedges
    r_eff = [0] * n_dedges          # in-flight tasks whose image is still unknown
    en = [0.0] * n_nodes
    out_dedges = [[] for _ in range(n_nodes)]
    for de in range(n_dedges):
        out_dedges[tails[de]].append(de)

    def q_add(v, j):
        q_member[v][j] = 1
        q_count[v] += 1
        q_order[v].append(j)

    def avail_add(de, j):
        if not avail[de][j]:
            avail[de][j] = 1
            avail_cnt[de] += 1
            if j < avail_min[de]:
                avail_min[de] = j

    def avail_remove(de, j):
        if avail[de][j]:
            avail[de][j] = 0
            avail_cnt[de] -= 1
            if j == avail_min[de]:
                row = avail[de]
                i = j + 1
                while i < d and not row[i]:
                    i += 1
                avail_min[de] = i

    q_add(seed_node, seed_sol)
    for de in out_dedges[seed_node]:
        avail_add(de, seed_sol)
    for v in range(n_nodes):
        en[v] = float(q_count[v])

    def select():
        best = -1
        best_pot = 0.0
        if pot_code == POT_WEIGHTED and dynamic_norm:
            norm = float(max(max(q_count), 1))
        else:
            norm = float(d)
        for de in range(n_dedges):
            if avail_cnt[de] == 0:
                continue
            h = heads[de]
            if pot_code == POT_ORDINAL:
                pot = 1.0 / order_rank[h]
            else:
                inc = alpha * (d - en[h]) / ((d - c_count[de >> 1])
                                             - alpha * r_eff[de])
                if pot_code == POT_GREEDY:
                    pot = inc
                elif pot_code == POT_WEIGHTED:
                    pot = (q_count[h] / norm) ** lam * inc
                else:  # POT_WEIGHTED_INF
                    pot = q_count[h] * (d + 1.0) + inc
            if best < 0 or pot > best_pot:
                best = de
                best_pot = pot
        return best

    def recompute_en():
        prod = [1.0] * n_nodes
        for de in range(n_dedges):
            if r_eff[de]:
                prod[heads[de]] *= 1.0 - alpha * r_eff[de] / (
                    d - c_count[de >> 1])
        for v in range(n_nodes):
            en[v] = q_count[v] + (d - q_count[v]) * (1.0 - prod[v])

    def add_pair(de, s, j):
        """Record correspondence found by a track from s along de hitting j."""
        e = de >> 1
        c_count[e] += 1
        c_pairs.append((e, s, j) if de & 1 == 0 else (e, j, s))
        rev = de ^ 1
        matched[de][s] = 1
        matched[rev][j] = 1
        avail_remove(rev, j)
        if infl[rev][j]:
            r_eff[rev] -= 1     # reverse in-flight task now redundant
        if f_member[rev][j]:
            f_member[rev][j] = 0    # failed start now has a known correspondence

    free = [True] * k
    free_count = k
    busy = [0] * k
    heap = []  # (completion time, seq, thread, dedge, start, started_at, duration)
    seq = 0
    scheduled = 0
    tracks = successes = failures = redundant = 0
    now = 0
    status = -1
    sat_node = -1

    if q_count[seed_node] == d:     # degree 1: the seed alone saturates
        status = STATUS_SATURATED
        sat_node = seed_node

    while status < 0:
        while free_count > 0 and scheduled < budget:
            de = select()
            if de < 0:
                break
            s = avail_min[de]
            thread = free.index(True)
            h = heads[de]
            en[h] += alpha * (d - en[h]) / ((d - c_count[de >> 1])
                                            - alpha * r_eff[de])
            r_eff[de] += 1
            infl[de][s] = 1
            avail_remove(de, s)
            dur = durations[de][s]
            heapq.heappush(heap, (now + dur, seq, thread, de, s, now, dur))
            seq += 1
            scheduled += 1
            free[thread] = False
            free_count -= 1
        if not heap:
            status = STATUS_BUDGET if scheduled >= budget and select() >= 0 \
                else STATUS_EXHAUSTED
            break
        etime, _, thread, de, s, started, dur = heapq.heappop(heap)
        now = etime
        free[thread] = True
        free_count += 1
        busy[thread] += dur
        infl[de][s] = 0
        was_matched = matched[de][s]
        if not was_matched:
            r_eff[de] -= 1
        tracks += 1
        if flags[de][s]:
            successes += 1
            if was_matched:
                redundant += 1
            else:
                j = images[de][s]
                add_pair(de, s, j)
                h = heads[de]
                if not q_member[h][j]:
                    q_add(h, j)
                    if q_count[h] == d:
                        status = STATUS_SATURATED
                        sat_node = h
                        break
                    rev = de ^ 1
                    for de2 in out_dedges[h]:
                        if de2 != rev and not matched[de2][j] \
                                and not f_member[de2][j]:
                            avail_add(de2, j)
        else:
            failures += 1
            if not was_matched:
                f_member[de][s] = 1
        recompute_en()

    wall = now
    inflight_left = []
    for etime, _, thread, de, s, started, dur in heap:
        busy[thread] += max(0, wall - started)
        inflight_left.append((s, de, started, dur))
    inflight_left.sort(key=lambda t: (t[2], t[1], t[0]))

    return {
        "status": status,
        "sat_node": sat_node,
        "wall": wall,
        "tracks": tracks,
        "successes": successes,
        "failures": failures,
        "redundant": redundant,
        "scheduled": scheduled,
        "busy": busy,
        "q_order": q_order,
        "c_pairs": c_pairs,
        "f_lists": [[s for s in range(d) if row[s]] for row in f_member],
        "inflight_left": inflight_left,
        "en": en,
    }
