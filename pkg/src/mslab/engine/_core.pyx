# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled discrete-event simulation kernel.

Line-by-line twin of ``_pure.run_kernel``: same arithmetic order, same
tie-breaking, same event ordering, so both engines produce identical runs.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport pow as cpow
from libc.stdlib cimport malloc, free as cfree

STATUS_SATURATED = 0
STATUS_EXHAUSTED = 1
STATUS_BUDGET = 2

POT_GREEDY = 0
POT_ORDINAL = 1
POT_WEIGHTED = 2
POT_WEIGHTED_INF = 3


cdef struct Event:
    long long time
    long long seq
    int thread
    int dedge
    int start
    long long started
    long long duration


cdef inline bint _ev_lt(Event* a, Event* b):
    if a.time != b.time:
        return a.time < b.time
    return a.seq < b.seq


cdef void _heap_push(Event* heap, int* size, Event ev):
    cdef int i = size[0]
    cdef int parent
    cdef Event tmp
    heap[i] = ev
    size[0] += 1
    while i > 0:
        parent = (i - 1) >> 1
        if _ev_lt(&heap[i], &heap[parent]):
            tmp = heap[i]
            heap[i] = heap[parent]
            heap[parent] = tmp
            i = parent
        else:
            break


cdef Event _heap_pop(Event* heap, int* size):
    cdef Event top = heap[0]
    cdef int i = 0, child
    cdef Event tmp
    size[0] -= 1
    heap[0] = heap[size[0]]
    while True:
        child = 2 * i + 1
        if child >= size[0]:
            break
        if child + 1 < size[0] and _ev_lt(&heap[child + 1], &heap[child]):
            child += 1
        if _ev_lt(&heap[child], &heap[i]):
            tmp = heap[i]
            heap[i] = heap[child]
            heap[child] = tmp
            i = child
        else:
            break
    return top


def run_kernel(int d, int n_nodes, tails_in, heads_in, images_in, flags_in,
               durations_in, int k, int pot_code, double lam, bint dynamic_norm,
               order_rank_in, int seed_node, int seed_sol, long long budget,
               double alpha):
    cdef cnp.ndarray[cnp.int32_t, ndim=1] tails = np.ascontiguousarray(tails_in, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] heads = np.ascontiguousarray(heads_in, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=2] images = np.ascontiguousarray(images_in, dtype=np.int32)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] flags = np.ascontiguousarray(flags_in, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] durations = np.ascontiguousarray(durations_in, dtype=np.int64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] order_rank = np.ascontiguousarray(order_rank_in, dtype=np.int32)

    cdef int n_dedges = tails.shape[0]
    cdef int n_edges = n_dedges // 2

    cdef cnp.ndarray[cnp.int32_t, ndim=1] q_count = np.zeros(n_nodes, dtype=np.int32)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] q_member = np.zeros((n_nodes, d), dtype=np.uint8)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] c_count = np.zeros(n_edges, dtype=np.int32)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] f_member = np.zeros((n_dedges, d), dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] matched = np.zeros((n_dedges, d), dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] infl = np.zeros((n_dedges, d), dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] avail = np.zeros((n_dedges, d), dtype=np.uint8)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] avail_cnt = np.zeros(n_dedges, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] avail_min = np.full(n_dedges, d, dtype=np.int32)
    # in-flight tasks whose image is still unknown
    cdef cnp.ndarray[cnp.int32_t, ndim=1] r_eff = np.zeros(n_dedges, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] en = np.zeros(n_nodes, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] prod = np.ones(n_nodes, dtype=np.float64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] busy = np.zeros(k, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] free_flag = np.ones(k, dtype=np.uint8)

    # CSR adjacency: directed edges grouped by tail node
    cdef cnp.ndarray[cnp.int32_t, ndim=1] out_start = np.zeros(n_nodes + 1, dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] out_list = np.zeros(n_dedges, dtype=np.int32)
    cdef int de, v, i, j, h, e, s
    for de in range(n_dedges):
        out_start[tails[de] + 1] += 1
    for v in range(n_nodes):
        out_start[v + 1] += out_start[v]
    fill = np.array(out_start[:n_nodes], dtype=np.int32)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] cursor = fill
    for de in range(n_dedges):
        out_list[cursor[tails[de]]] = de
        cursor[tails[de]] += 1

    q_order = [[] for _ in range(n_nodes)]
    c_pairs = []

    q_member[seed_node, seed_sol] = 1
    q_count[seed_node] = 1
    q_order[seed_node].append(seed_sol)
    for i in range(out_start[seed_node], out_start[seed_node + 1]):
        de = out_list[i]
        avail[de, seed_sol] = 1
        avail_cnt[de] = 1
        avail_min[de] = seed_sol
    for v in range(n_nodes):
        en[v] = <double>q_count[v]

    cdef Event* heap = <Event*>malloc(sizeof(Event) * (k + 1))
    cdef int heap_size = 0
    cdef Event ev
    cdef long long seq = 0, scheduled = 0, now = 0
    cdef long long tracks = 0, successes = 0, failures = 0, redundant = 0
    cdef int free_count = k
    cdef int status = -1, sat_node = -1
    cdef int best, thread, rev, de2, qmax, was_matched
    cdef double best_pot, pot, inc, norm
    cdef long long dur, wall

    if q_count[seed_node] == d:     # degree 1: the seed alone saturates
        status = STATUS_SATURATED
        sat_node = seed_node

    try:
        while status < 0:
            # assignment phase at the current simulated time
            while free_count > 0 and scheduled < budget:
                # select the maximizing candidate edge
                best = -1
                best_pot = 0.0
                if pot_code == POT_WEIGHTED and dynamic_norm:
                    qmax = 1
                    for v in range(n_nodes):
                        if q_count[v] > qmax:
                            qmax = q_count[v]
                    norm = <double>qmax
                else:
                    norm = <double>d
                for de in range(n_dedges):
                    if avail_cnt[de] == 0:
                        continue
                    h = heads[de]
                    if pot_code == POT_ORDINAL:
                        pot = 1.0 / order_rank[h]
                    else:
                        inc = alpha * (d - en[h]) / (
                            (d - c_count[de >> 1]) - alpha * r_eff[de])
                        if pot_code == POT_GREEDY:
                            pot = inc
                        elif pot_code == POT_WEIGHTED:
                            pot = cpow(q_count[h] / norm, lam) * inc
                        else:
                            pot = q_count[h] * (d + 1.0) + inc
                    if best < 0 or pot > best_pot:
                        best = de
                        best_pot = pot
                if best < 0:
                    break
                de = best
                s = avail_min[de]
                thread = 0
                while not free_flag[thread]:
                    thread += 1
                h = heads[de]
                en[h] = en[h] + alpha * (d - en[h]) / (
                    (d - c_count[de >> 1]) - alpha * r_eff[de])
                r_eff[de] += 1
                infl[de, s] = 1
                # remove s from avail[de]
                avail[de, s] = 0
                avail_cnt[de] -= 1
                if s == avail_min[de]:
                    i = s + 1
                    while i < d and not avail[de, i]:
                        i += 1
                    avail_min[de] = i
                dur = durations[de, s]
                ev.time = now + dur
                ev.seq = seq
                ev.thread = thread
                ev.dedge = de
                ev.start = s
                ev.started = now
                ev.duration = dur
                _heap_push(heap, &heap_size, ev)
                seq += 1
                scheduled += 1
                free_flag[thread] = 0
                free_count -= 1
            if heap_size == 0:
                # anything left schedulable means we stopped on the budget
                best = -1
                if scheduled >= budget:
                    for de in range(n_dedges):
                        if avail_cnt[de] > 0:
                            best = de
                            break
                status = STATUS_BUDGET if best >= 0 else STATUS_EXHAUSTED
                break
            ev = _heap_pop(heap, &heap_size)
            now = ev.time
            thread = ev.thread
            de = ev.dedge
            s = ev.start
            free_flag[thread] = 1
            free_count += 1
            busy[thread] += ev.duration
            infl[de, s] = 0
            was_matched = matched[de, s]
            if not was_matched:
                r_eff[de] -= 1
            tracks += 1
            if flags[de, s]:
                successes += 1
                if was_matched:
                    redundant += 1
                else:
                    j = images[de, s]
                    e = de >> 1
                    c_count[e] += 1
                    if de & 1 == 0:
                        c_pairs.append((e, s, j))
                    else:
                        c_pairs.append((e, j, s))
                    rev = de ^ 1
                    matched[de, s] = 1
                    matched[rev, j] = 1
                    if avail[rev, j]:
                        avail[rev, j] = 0
                        avail_cnt[rev] -= 1
                        if j == avail_min[rev]:
                            i = j + 1
                            while i < d and not avail[rev, i]:
                                i += 1
                            avail_min[rev] = i
                    if infl[rev, j]:
                        r_eff[rev] -= 1     # reverse in-flight task now redundant
                    if f_member[rev, j]:
                        f_member[rev, j] = 0    # correspondence now known
                    h = heads[de]
                    if not q_member[h, j]:
                        q_member[h, j] = 1
                        q_count[h] += 1
                        q_order[h].append(j)
                        if q_count[h] == d:
                            status = STATUS_SATURATED
                            sat_node = h
                            break
                        for i in range(out_start[h], out_start[h + 1]):
                            de2 = out_list[i]
                            if de2 != rev and not matched[de2, j] \
                                    and not f_member[de2, j] and not avail[de2, j]:
                                avail[de2, j] = 1
                                avail_cnt[de2] += 1
                                if j < avail_min[de2]:
                                    avail_min[de2] = j
            else:
                failures += 1
                if not was_matched:
                    f_member[de, s] = 1
            # full expectation rebuild from (Q, C) plus remaining in-flight
            for v in range(n_nodes):
                prod[v] = 1.0
            for de2 in range(n_dedges):
                if r_eff[de2]:
                    prod[heads[de2]] *= 1.0 - alpha * r_eff[de2] / (
                        <double>(d - c_count[de2 >> 1]))
            for v in range(n_nodes):
                en[v] = q_count[v] + (d - q_count[v]) * (1.0 - prod[v])

        wall = now
        inflight_left = []
        for i in range(heap_size):
            ev = heap[i]
            if wall - ev.started > 0:
                busy[ev.thread] += wall - ev.started
            inflight_left.append((ev.start, ev.dedge, ev.started, ev.duration))
        inflight_left.sort(key=lambda t: (t[2], t[1], t[0]))
    finally:
        cfree(heap)

    return {
        "status": status,
        "sat_node": sat_node,
        "wall": int(wall),
        "tracks": int(tracks),
        "successes": int(successes),
        "failures": int(failures),
        "redundant": int(redundant),
        "scheduled": int(scheduled),
        "busy": [int(b) for b in busy],
        "q_order": q_order,
        "c_pairs": c_pairs,
        "f_lists": [[s for s in range(d) if f_member[de, s]]
                    for de in range(n_dedges)],
        "inflight_left": inflight_left,
        "en": [float(x) for x in en],
    }
