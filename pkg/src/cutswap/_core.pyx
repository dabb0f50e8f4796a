# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels for the hot loops. Mirrors the pure-Python modules move for move."""

import numpy as np

from libc.stdint cimport int64_t
from libc.stdlib cimport free, malloc, qsort, realloc

ctypedef int64_t idx_t

from cutswap.errors import InternalInvariant, InvalidOrder

cdef enum:
    ROW = 0
    MEMBERS = 1
    EPOST = 2


def sl_lists(idx_t n, const idx_t[::1] indptr, const idx_t[::1] indices, const idx_t[::1] order):
    cdef idx_t m = order.shape[0]
    cdef idx_t N = indices.shape[0]
    ptr_a = np.zeros(n + 1, dtype=np.int64)
    rows_a = np.empty(N, dtype=np.int64)
    fill_a = np.empty(n + 1, dtype=np.int64)
    cdef idx_t[::1] ptr = ptr_a
    cdef idx_t[::1] rows = rows_a
    cdef idx_t[::1] fill = fill_a
    cdef idx_t k, c, p, r
    for k in range(N):
        ptr[indices[k] + 1] += 1
    for c in range(n):
        ptr[c + 1] += ptr[c]
    for c in range(n + 1):
        fill[c] = ptr[c]
    for p in range(m - 1, -1, -1):
        r = order[p]
        for k in range(indptr[r], indptr[r + 1]):
            c = indices[k]
            rows[fill[c]] = r
            fill[c] += 1
    return ptr_a, rows_a


def compute_max(idx_t n, const idx_t[::1] indptr, const idx_t[::1] indices,
                const idx_t[::1] order, const idx_t[::1] rank):
    cdef idx_t m = order.shape[0]
    cdef idx_t sz = n + 1
    elems_a = np.arange(sz, dtype=np.int64)
    pos_a = np.arange(sz, dtype=np.int64)
    cdef idx_t[::1] elems = elems_a
    cdef idx_t[::1] pos = pos_a
    cdef idx_t[::1] part_of = np.zeros(sz, dtype=np.int64)
    cdef idx_t[::1] pstart = np.zeros(sz, dtype=np.int64)
    cdef idx_t[::1] pend = np.zeros(sz, dtype=np.int64)
    cdef idx_t[::1] tcount = np.zeros(sz, dtype=np.int64)
    cdef idx_t[::1] touched = np.zeros(sz, dtype=np.int64)
    cdef idx_t[::1] fill = np.zeros(sz, dtype=np.int64)
    cdef idx_t[::1] left = np.zeros(m + 1, dtype=np.int64)
    cdef idx_t[::1] right = np.zeros(m + 1, dtype=np.int64)
    cdef idx_t[::1] head = np.full(sz, -1, dtype=np.int64)
    cdef idx_t[::1] tail = np.full(sz, -1, dtype=np.int64)
    cdef idx_t[::1] nxt = np.full(m + 1, -1, dtype=np.int64)
    cdef idx_t[::1] prv = np.full(m + 1, -1, dtype=np.int64)
    cdef idx_t[::1] slot = np.full(m + 1, -1, dtype=np.int64)
    cdef idx_t[::1] by_left = np.zeros(m + 1, dtype=np.int64)
    max_a = np.full(m, -1, dtype=np.int64)
    cdef idx_t[::1] max_of = max_a
    cdef idx_t nparts = 1
    cdef idx_t i, k, x, y, p, q, t, r, r2, dst, src, nt, c, pp, last, a, b, lo, hi
    if n == 0 or m == 0:
        return max_a
    pend[0] = n

    # step 1: refine by every row in LR order, touched elements to the right
    for i in range(m):
        r = order[i]
        nt = 0
        for k in range(indptr[r], indptr[r + 1]):
            x = indices[k]
            p = part_of[x]
            t = tcount[p]
            if t == 0:
                touched[nt] = p
                nt += 1
            dst = pend[p] - 1 - t
            src = pos[x]
            y = elems[dst]
            elems[dst] = x
            elems[src] = y
            pos[x] = dst
            pos[y] = src
            tcount[p] = t + 1
        for k in range(nt):
            p = touched[k]
            t = tcount[p]
            tcount[p] = 0
            if t == pend[p] - pstart[p]:
                continue
            q = nparts
            nparts += 1
            pstart[q] = pend[p] - t
            pend[q] = pend[p]
            pend[p] -= t
            for pp in range(pstart[q], pend[q]):
                part_of[elems[pp]] = q
    # equal columns: ascending index inside their part
    for p in range(nparts):
        fill[p] = pstart[p]
    for c in range(n):
        p = part_of[c]
        elems[fill[p]] = c
        pos[c] = fill[p]
        fill[p] += 1

    # step 2: bounds and the AM buckets
    for r in range(m):
        lo = n
        hi = -1
        for k in range(indptr[r], indptr[r + 1]):
            x = pos[indices[k]]
            if x < lo:
                lo = x
            if x > hi:
                hi = x
        left[r] = lo
        right[r] = hi
    for c in range(n + 1):
        fill[c] = 0
    for r in range(m):
        fill[left[r] + 1] += 1
    for c in range(n):
        fill[c + 1] += fill[c]
    for i in range(m):
        r = order[i]
        by_left[fill[left[r]]] = r
        fill[left[r]] += 1
    for i in range(m):
        r = by_left[i]
        p = right[r]
        t = tail[p]
        prv[r] = t
        if t == -1:
            head[p] = r
        else:
            nxt[t] = r
        tail[p] = r
        slot[r] = p

    # step 3: refine again from P_f; elements never move
    for c in range(n):
        part_of[c] = 0
    nparts = 1
    pstart[0] = 0
    pend[0] = n
    for i in range(m):
        r2 = order[i]
        _am_remove(r2, &head[0], &tail[0], &nxt[0], &prv[0], &slot[0])
        nt = 0
        for k in range(indptr[r2], indptr[r2 + 1]):
            p = part_of[indices[k]]
            if tcount[p] == 0:
                touched[nt] = p
                nt += 1
            tcount[p] += 1
        for k in range(indptr[r2], indptr[r2 + 1]):
            x = indices[k]
            p = part_of[x]
            if pos[x] < pend[p] - tcount[p]:
                for a in range(nt):
                    tcount[touched[a]] = 0
                raise InternalInvariant(f"column {x} is not right-aligned in its part")
        for k in range(nt):
            p = touched[k]
            t = tcount[p]
            tcount[p] = 0
            if t == pend[p] - pstart[p]:
                continue
            q = nparts
            nparts += 1
            pstart[q] = pend[p] - t
            pend[q] = pend[p]
            pend[p] -= t
            last = pend[p] - 1
            for pp in range(pstart[q], pend[q]):
                part_of[elems[pp]] = q
                r = head[pp]
                while r != -1 and left[r] <= last:
                    if rank[r2] >= rank[r]:
                        raise InternalInvariant(f"row {r2} does not precede row {r}")
                    _am_remove(r, &head[0], &tail[0], &nxt[0], &prv[0], &slot[0])
                    max_of[r] = r2
                    r = head[pp]
    return max_a


cdef inline void _am_remove(idx_t r, idx_t* head, idx_t* tail, idx_t* nxt, idx_t* prv, idx_t* slot) nogil:
    cdef idx_t p = slot[r]
    cdef idx_t a, b
    if p == -1:
        return
    a = prv[r]
    b = nxt[r]
    if a == -1:
        head[p] = b
    else:
        nxt[a] = b
    if b == -1:
        tail[p] = a
    else:
        prv[b] = a
    slot[r] = -1


def build_intervals(idx_t m, const idx_t[::1] sl_ptr, const idx_t[::1] sl_rows,
                    const idx_t[::1] rank, const idx_t[::1] max_of):
    cdef idx_t n = sl_ptr.shape[0] - 1
    cdef idx_t N = sl_rows.shape[0]
    cdef idx_t[::1] send = np.empty(N + 1, dtype=np.int64)
    cdef idx_t[::1] mcount = np.zeros(m + 1, dtype=np.int64)
    cdef idx_t[::1] ecount = np.zeros(m + 1, dtype=np.int64)
    cdef idx_t c, i, j, lo, hi, mr, lim, kk, nint = 0, total = 0, r, kind, iid
    for c in range(n):
        lo = sl_ptr[c]
        hi = sl_ptr[c + 1]
        for i in range(lo, hi):
            send[i] = -1
            mr = max_of[sl_rows[i]]
            if mr < 0:
                continue
            lim = rank[mr]
            j = i + 1
            while j < hi and rank[sl_rows[j]] >= lim:
                j += 1
            if j - i < 2:
                continue
            send[i] = j
            nint += 1
            if sl_rows[j - 1] == mr:
                for kk in range(i, j):
                    mcount[sl_rows[kk]] += 1
            else:
                for kk in range(i, j):
                    ecount[sl_rows[kk]] += 1
    start_a = np.empty(nint, dtype=np.int64)
    end_a = np.empty(nint, dtype=np.int64)
    kind_a = np.empty(nint, dtype=np.int64)
    col_a = np.empty(nint, dtype=np.int64)
    ptr_a = np.zeros(m + 1, dtype=np.int64)
    mcount_a = np.empty(m, dtype=np.int64)
    cdef idx_t[::1] istart = start_a
    cdef idx_t[::1] iend = end_a
    cdef idx_t[::1] ikind = kind_a
    cdef idx_t[::1] icol = col_a
    cdef idx_t[::1] ptr = ptr_a
    cdef idx_t[::1] mc = mcount_a
    cdef idx_t[::1] mfill = np.empty(m + 1, dtype=np.int64)
    cdef idx_t[::1] efill = np.empty(m + 1, dtype=np.int64)
    for r in range(m):
        ptr[r + 1] = ptr[r] + mcount[r] + ecount[r]
        mc[r] = mcount[r]
        mfill[r] = ptr[r]
        efill[r] = ptr[r] + mcount[r]
    occ_a = np.empty(ptr[m] if m else 0, dtype=np.int64)
    cdef idx_t[::1] occ = occ_a
    iid = 0
    for c in range(n):
        for i in range(sl_ptr[c], sl_ptr[c + 1]):
            j = send[i]
            if j < 0:
                continue
            kind = 0 if sl_rows[j - 1] == max_of[sl_rows[i]] else 1
            istart[iid] = i
            iend[iid] = j
            ikind[iid] = kind
            icol[iid] = c
            for kk in range(i, j):
                r = sl_rows[kk]
                if kind == 0:
                    occ[mfill[r]] = iid
                    mfill[r] += 1
                else:
                    occ[efill[r]] = iid
                    efill[r] += 1
            iid += 1
    return start_a, end_a, kind_a, col_a, ptr_a, mcount_a, occ_a


cdef inline idx_t _next_live(idx_t* cur, idx_t r, idx_t stop, const idx_t* occ, const unsigned char* removed) nogil:
    cdef idx_t k = cur[r]
    while k < stop and removed[occ[k]]:
        k += 1
    cur[r] = k
    if k < stop:
        return occ[k]
    return -1


cdef struct _Stack:
    idx_t* data
    idx_t size
    idx_t cap


cdef int _push(_Stack* st, idx_t tag, idx_t a, idx_t b) except -1:
    cdef idx_t* grown
    if st.size + 3 > st.cap:
        st.cap = st.cap * 2 + 48
        grown = <idx_t*> realloc(st.data, st.cap * sizeof(idx_t))
        if grown == NULL:
            raise MemoryError()
        st.data = grown
    st.data[st.size] = tag
    st.data[st.size + 1] = a
    st.data[st.size + 2] = b
    st.size += 3
    return 0


def classes_and_orders(idx_t m, const idx_t[::1] sl_rows, const idx_t[::1] istart,
                       const idx_t[::1] iend, const idx_t[::1] ikind, const idx_t[::1] ti_ptr,
                       const idx_t[::1] ti_mcount, const idx_t[::1] ti_occ, const idx_t[::1] order,
                       const idx_t[::1] max_of):
    cdef idx_t nI = istart.shape[0]
    cdef unsigned char[::1] removed = np.zeros(nI + 1, dtype=np.uint8)
    cdef idx_t[::1] mcur = np.empty(m + 1, dtype=np.int64)
    cdef idx_t[::1] mend = np.empty(m + 1, dtype=np.int64)
    cdef idx_t[::1] ecur = np.empty(m + 1, dtype=np.int64)
    label_a = np.zeros(m, dtype=np.int64)
    emitted_a = np.empty(m, dtype=np.int64)
    cptr_a = np.zeros(m + 1, dtype=np.int64)
    cdef idx_t[::1] label = label_a
    cdef idx_t[::1] emitted = emitted_a
    cdef idx_t[::1] cptr = cptr_a
    cdef idx_t r, i, l, s, e, k, tag, a, b, nc = 0, ne = 0, live = nI
    cdef const idx_t* occ = &ti_occ[0] if ti_occ.shape[0] else NULL
    cdef unsigned char* rem = &removed[0]
    cdef _Stack st
    for r in range(m):
        mcur[r] = ti_ptr[r]
        mend[r] = ti_ptr[r] + ti_mcount[r]
        ecur[r] = mend[r]
    st.data = NULL
    st.size = 0
    st.cap = 0
    try:
        for i in range(m):
            l = order[i]
            if _next_live(&mcur[0], l, mend[l], occ, rem) < 0:
                continue
            nc += 1
            _push(&st, ROW, l, 0)
            while st.size:
                st.size -= 3
                tag = st.data[st.size]
                a = st.data[st.size + 1]
                b = st.data[st.size + 2]
                if tag == ROW:
                    k = _next_live(&mcur[0], a, mend[a], occ, rem)
                    if k >= 0:
                        rem[k] = 1
                        live -= 1
                        s = istart[k]
                        e = iend[k]
                        r = sl_rows[s]
                        if label[r] == 0:
                            label[r] = nc
                            emitted[ne] = r
                            ne += 1
                        r = sl_rows[e - 1]
                        if label[r] == 0:
                            label[r] = nc
                            emitted[ne] = r
                            ne += 1
                        for b in range(s + 1, e - 1):
                            r = sl_rows[b]
                            if label[r] == 0:
                                label[r] = nc
                                emitted[ne] = r
                                ne += 1
                        _push(&st, ROW, a, 0)
                        _push(&st, MEMBERS, k, s)
                        continue
                    k = _next_live(&ecur[0], a, ti_ptr[a + 1], occ, rem)
                    if k >= 0:
                        rem[k] = 1
                        live -= 1
                        r = sl_rows[istart[k]]
                        if label[r] == 0:
                            label[r] = nc
                            emitted[ne] = r
                            ne += 1
                        r = max_of[r]
                        if label[r] == 0:
                            label[r] = nc
                            emitted[ne] = r
                            ne += 1
                        _push(&st, ROW, a, 0)
                        _push(&st, EPOST, k, 0)
                        _push(&st, ROW, sl_rows[istart[k]], 0)
                elif tag == MEMBERS:
                    e = iend[a]
                    while b < e:
                        r = sl_rows[b]
                        if (_next_live(&mcur[0], r, mend[r], occ, rem) >= 0
                                or _next_live(&ecur[0], r, ti_ptr[r + 1], occ, rem) >= 0):
                            break
                        b += 1
                    if b < e:
                        _push(&st, MEMBERS, a, b + 1)
                        _push(&st, ROW, sl_rows[b], 0)
                else:
                    s = istart[a]
                    e = iend[a]
                    if label[sl_rows[s]] == 0:
                        raise InternalInvariant(f"first row {sl_rows[s]} of E interval {a} unlabeled after drain")
                    for b in range(s + 1, e):
                        r = sl_rows[b]
                        if label[r] == 0:
                            label[r] = nc
                            emitted[ne] = r
                            ne += 1
                    _push(&st, MEMBERS, a, s + 1)
            cptr[nc] = ne
    finally:
        free(st.data)
    if live:
        raise InternalInvariant(f"{live} intervals never processed")
    return label_a, emitted_a[:ne].copy(), cptr_a[:nc + 1].copy()


# -- swap partitioning -------------------------------------------------------

cdef enum:
    NOCUT = -1
    CUT = 0
    GAP = 1
    PARTIAL = 2
    NOT_AT_EXTREMITY = 3


cdef int _cmp_idx(const void* a, const void* b) noexcept nogil:
    cdef idx_t x = (<const idx_t*> a)[0]
    cdef idx_t y = (<const idx_t*> b)[0]
    return (x > y) - (x < y)


cdef class _Partition:
    """Circular ordered partition of one class's support (see cutswap.refine)."""

    cdef const idx_t[::1] indptr
    cdef const idx_t[::1] indices
    cdef idx_t[::1] cells, cell_part, lo, hi, tcount, loc, emb, touched, fresh
    cdef idx_t s, wlo, whi, nparts, stamp, nt, nf

    def __cinit__(self, idx_t n, const idx_t[::1] indptr, const idx_t[::1] indices):
        self.indptr = indptr
        self.indices = indices
        self.cells = np.zeros(n + 1, dtype=np.int64)
        self.cell_part = np.zeros(n + 1, dtype=np.int64)
        self.lo = np.zeros(n + 1, dtype=np.int64)
        self.hi = np.zeros(n + 1, dtype=np.int64)
        self.tcount = np.zeros(n + 1, dtype=np.int64)
        self.loc = np.zeros(n + 1, dtype=np.int64)
        self.emb = np.zeros(n + 1, dtype=np.int64)
        self.touched = np.zeros(n + 1, dtype=np.int64)
        self.fresh = np.zeros(n + 1, dtype=np.int64)

    cdef inline idx_t phys(self, idx_t q):
        cdef idx_t k = q % self.s
        if k < 0:
            k += self.s
        return k

    cdef inline idx_t part_at(self, idx_t q):
        return self.cell_part[self.phys(q)]

    cdef void reset(self, idx_t s, idx_t stamp):
        self.s = s
        self.stamp = stamp
        self.wlo = 0
        self.whi = 0
        self.nparts = 0

    cdef idx_t new_part(self, idx_t lo, idx_t hi):
        cdef idx_t p = self.nparts
        cdef idx_t q
        self.nparts += 1
        self.lo[p] = lo
        self.hi[p] = hi
        self.tcount[p] = 0
        for q in range(lo, hi):
            self.cell_part[self.phys(q)] = p
        return p

    cdef void grow(self, bint at_right):
        cdef idx_t k = self.nf
        cdef idx_t lo, p, i, x, c
        if at_right:
            lo = self.whi
            self.whi += k
        else:
            self.wlo -= k
            lo = self.wlo
        p = self.new_part(lo, lo + k)
        for i in range(k):
            x = self.fresh[i]
            c = self.phys(lo + i)
            self.cells[c] = x
            self.cell_part[c] = p
            self.loc[x] = lo + i
            self.emb[x] = self.stamp

    cdef void split(self, idx_t p, idx_t r, bint to_right):
        cdef idx_t i = 0
        cdef idx_t k, x, y, dst, src
        for k in range(self.indptr[r], self.indptr[r + 1]):
            x = self.indices[k]
            if self.emb[x] != self.stamp or self.part_at(self.loc[x]) != p:
                continue
            dst = self.hi[p] - 1 - i if to_right else self.lo[p] + i
            src = self.loc[x]
            y = self.cells[self.phys(dst)]
            self.cells[self.phys(dst)] = x
            self.cells[self.phys(src)] = y
            self.loc[x] = dst
            self.loc[y] = src
            i += 1
        if to_right:
            self.hi[p] -= i
            self.new_part(self.hi[p], self.hi[p] + i)
        else:
            self.lo[p] += i
            self.new_part(self.lo[p] - i, self.lo[p])

    cdef void walk(self, bint at_right, idx_t* count, idx_t* partial, int* stopped):
        # stopped: 0 untouched, 1 partial, 2 end
        cdef idx_t cur = self.part_at(self.whi - 1 if at_right else self.wlo)
        cdef idx_t edge
        count[0] = 0
        partial[0] = -1
        while True:
            if self.tcount[cur] == 0:
                stopped[0] = 0
                return
            count[0] += 1
            if self.tcount[cur] < self.hi[cur] - self.lo[cur]:
                partial[0] = cur
                stopped[0] = 1
                return
            edge = self.lo[cur] if at_right else self.hi[cur]
            if edge == (self.wlo if at_right else self.whi):
                stopped[0] = 2
                return
            cur = self.part_at(edge - 1 if at_right else edge)

    cdef int refine(self, idx_t r):
        cdef int out = self._refine(r)
        cdef idx_t i
        for i in range(self.nt):
            self.tcount[self.touched[i]] = 0
        return out

    cdef int _refine(self, idx_t r):
        cdef idx_t k, x, p, embedded = 0, left, right, cur, i
        cdef idx_t cnt_r, cnt_l, part_r, part_l
        cdef int stop_r, stop_l
        self.nt = 0
        self.nf = 0
        for k in range(self.indptr[r], self.indptr[r + 1]):
            x = self.indices[k]
            if self.emb[x] != self.stamp:
                self.fresh[self.nf] = x
                self.nf += 1
                continue
            embedded += 1
            p = self.part_at(self.loc[x])
            if self.tcount[p] == 0:
                self.touched[self.nt] = p
                self.nt += 1
            self.tcount[p] += 1
        if embedded == 0:
            return NOCUT
        if self.nf == 0 and self.nt == 1:
            return NOCUT
        if embedded == self.whi - self.wlo:
            return NOCUT
        if self.nf == 0:
            left = self.touched[0]
            right = left
            for i in range(1, self.nt):
                p = self.touched[i]
                if self.lo[p] < self.lo[left]:
                    left = p
                if self.lo[p] > self.lo[right]:
                    right = p
            cur = left
            while cur != right:
                cur = self.part_at(self.hi[cur])
                if self.tcount[cur] == 0:
                    return GAP
                if cur != right and self.tcount[cur] < self.hi[cur] - self.lo[cur]:
                    return PARTIAL
            if self.tcount[left] < self.hi[left] - self.lo[left]:
                self.split(left, r, True)
            if self.tcount[right] < self.hi[right] - self.lo[right]:
                self.split(right, r, False)
            return CUT
        self.walk(True, &cnt_r, &part_r, &stop_r)
        if cnt_r == self.nt:
            if part_r >= 0:
                self.split(part_r, r, True)
            self.grow(True)
            return CUT
        self.walk(False, &cnt_l, &part_l, &stop_l)
        if cnt_l == self.nt:
            if part_l >= 0:
                self.split(part_l, r, False)
            self.grow(False)
            return CUT
        if cnt_r:
            return PARTIAL if stop_r == 1 else GAP
        if cnt_l:
            return PARTIAL if stop_l == 1 else GAP
        return NOT_AT_EXTREMITY

    cdef void init_row(self, idx_t r):
        cdef idx_t k
        self.nf = 0
        for k in range(self.indptr[r], self.indptr[r + 1]):
            self.fresh[self.nf] = self.indices[k]
            self.nf += 1
        self.grow(True)

    cdef idx_t emit_parts(self, idx_t[::1] out_cols, idx_t[::1] out_pptr, idx_t ncols, idx_t nparts_out):
        """Append parts left to right (each sorted); return the new part count."""
        cdef idx_t q = self.wlo
        cdef idx_t p, k, first
        while q < self.whi:
            p = self.part_at(q)
            first = ncols
            for k in range(self.lo[p], self.hi[p]):
                out_cols[ncols] = self.cells[self.phys(k)]
                ncols += 1
            qsort(&out_cols[first], ncols - first, sizeof(idx_t), _cmp_idx)
            nparts_out += 1
            out_pptr[nparts_out] = ncols
            q = self.hi[p]
        return nparts_out


def swap_partition(idx_t n, const idx_t[::1] indptr, const idx_t[::1] indices,
                   const idx_t[::1] order_rows, const idx_t[::1] class_ptr):
    """Run swap partitioning on every class.

    Returns (ok, fail_row, fail_code, swaps, part_cols, part_ptr, class_part_ptr).
    A failed class owns no parts.
    """
    cdef idx_t nc = class_ptr.shape[0] - 1
    cdef idx_t[::1] sup_stamp = np.zeros(n + 1, dtype=np.int64)
    cdef idx_t[::1] support = np.zeros(nc + 1, dtype=np.int64)
    cdef idx_t ci, j, k, x, r, nxt, total = 0, stamp, cnt
    cdef int out
    for ci in range(nc):
        stamp = ci + 1
        cnt = 0
        for j in range(class_ptr[ci], class_ptr[ci + 1]):
            r = order_rows[j]
            for k in range(indptr[r], indptr[r + 1]):
                x = indices[k]
                if sup_stamp[x] != stamp:
                    sup_stamp[x] = stamp
                    cnt += 1
        support[ci] = cnt
        total += cnt
    ok_a = np.ones(nc, dtype=np.int64)
    fail_row_a = np.full(nc, -1, dtype=np.int64)
    fail_code_a = np.zeros(nc, dtype=np.int64)
    swaps_a = np.zeros(nc, dtype=np.int64)
    cols_a = np.empty(total, dtype=np.int64)
    pptr_a = np.zeros(total + 1, dtype=np.int64)
    cpp_a = np.zeros(nc + 1, dtype=np.int64)
    cdef idx_t[::1] ok = ok_a
    cdef idx_t[::1] fail_row = fail_row_a
    cdef idx_t[::1] fail_code = fail_code_a
    cdef idx_t[::1] swaps = swaps_a
    cdef idx_t[::1] cols = cols_a
    cdef idx_t[::1] pptr = pptr_a
    cdef idx_t[::1] cpp = cpp_a
    cdef idx_t ncols = 0, nparts = 0, a, b
    cdef _Partition pa = _Partition(n, indptr, indices)
    for ci in range(nc):
        a = class_ptr[ci]
        b = class_ptr[ci + 1]
        pa.reset(support[ci], ci + 1)
        pa.init_row(order_rows[a])
        j = a + 1
        out = CUT
        while j < b:
            r = order_rows[j]
            out = pa.refine(r)
            if out == NOCUT:
                if j + 1 >= b:
                    raise InvalidOrder(f"row {r} cuts nothing and is last in class {ci + 1}")
                nxt = order_rows[j + 1]
                out = pa.refine(nxt)
                if out == NOCUT:
                    raise InvalidOrder(f"row {nxt} swapped in for row {r} cuts nothing")
                if out == CUT:
                    out = pa.refine(r)
                    if out == NOCUT:
                        raise InvalidOrder(f"deferred row {r} still cuts nothing after row {nxt}")
                else:
                    r = nxt
                swaps[ci] += 1
                j += 2
            else:
                j += 1
            if out > 0:
                ok[ci] = 0
                fail_row[ci] = r
                fail_code[ci] = out
                break
        if out <= 0:
            nparts = pa.emit_parts(cols, pptr, ncols, nparts)
            ncols = pptr[nparts]
        cpp[ci + 1] = nparts
    return ok_a, fail_row_a, fail_code_a, swaps_a, cols_a[:ncols].copy(), pptr_a[:nparts + 1].copy(), cpp_a
