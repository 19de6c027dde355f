# cython: language_level=3
"""Native core: sequentially consistent atomics and nogil LL/IC kernels.

Mirrors the API of :mod:`basketq._pycore`. All shared-memory instructions use
``__ATOMIC_SEQ_CST``. The kernels release the GIL so Python threads calling
them run truly in parallel.
"""

from libc.stdint cimport int64_t, uint64_t
from libc.stdlib cimport free

cdef extern from *:
    """
    #include <stdint.h>
    #include <stdlib.h>
    #include <time.h>

    static inline int64_t bq_load(int64_t *p) {
        return __atomic_load_n(p, __ATOMIC_SEQ_CST);
    }
    static inline void bq_store(int64_t *p, int64_t v) {
        __atomic_store_n(p, v, __ATOMIC_SEQ_CST);
    }
    static inline int bq_cas(int64_t *p, int64_t expected, int64_t desired) {
        return __atomic_compare_exchange_n(p, &expected, desired, 0,
                                           __ATOMIC_SEQ_CST, __ATOMIC_SEQ_CST);
    }
    static inline int64_t bq_fai(int64_t *p) {
        return __atomic_fetch_add(p, 1, __ATOMIC_SEQ_CST);
    }
    static inline int64_t bq_swap(int64_t *p, int64_t v) {
        return __atomic_exchange_n(p, v, __ATOMIC_SEQ_CST);
    }
    static inline double bq_now(void) {
        struct timespec ts;
        clock_gettime(CLOCK_MONOTONIC, &ts);
        return (double)ts.tv_sec + 1e-9 * (double)ts.tv_nsec;
    }
    static inline uint64_t bq_splitmix(uint64_t *s) {
        uint64_t z = (*s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    static inline int64_t *bq_alloc(size_t n) {
        void *p = NULL;
        if (n == 0) n = 1;
        if (posix_memalign(&p, 64, n * sizeof(int64_t)) != 0) return NULL;
        for (size_t i = 0; i < n; i++) ((int64_t *)p)[i] = 0;
        return (int64_t *)p;
    }
    """
    int64_t bq_load(int64_t *p) nogil
    void bq_store(int64_t *p, int64_t v) nogil
    int bq_cas(int64_t *p, int64_t expected, int64_t desired) nogil
    int64_t bq_fai(int64_t *p) nogil
    int64_t bq_swap(int64_t *p, int64_t v) nogil
    double bq_now() nogil
    uint64_t bq_splitmix(uint64_t *s) nogil
    int64_t *bq_alloc(size_t n) nogil

BACKEND = "native"

# 64-byte cache line / 8-byte cell.
cdef enum:
    LINE_CELLS = 8


cdef class AtomicIntArray:
    """Fixed-size array of 64-bit integer cells with atomic instructions.

    With ``pad=True`` each cell occupies its own cache line.
    """

    cdef int64_t *buf
    cdef readonly Py_ssize_t size
    cdef readonly Py_ssize_t stride

    def __cinit__(self, Py_ssize_t size, bint pad=False):
        if size <= 0:
            raise ValueError("size must be positive")
        self.size = size
        self.stride = LINE_CELLS if pad else 1
        self.buf = bq_alloc(<size_t>(size * self.stride))
        if self.buf == NULL:
            raise MemoryError()

    def __dealloc__(self):
        if self.buf != NULL:
            free(self.buf)

    def __len__(self):
        return self.size

    @property
    def padded(self):
        return self.stride != 1

    cdef inline int64_t *_cell(self, Py_ssize_t i) except NULL:
        if i < 0 or i >= self.size:
            raise IndexError(i)
        return self.buf + i * self.stride

    def load(self, Py_ssize_t i):
        return bq_load(self._cell(i))

    def store(self, Py_ssize_t i, int64_t v):
        bq_store(self._cell(i), v)

    def cas(self, Py_ssize_t i, int64_t expected, int64_t desired):
        return bool(bq_cas(self._cell(i), expected, desired))

    def fai(self, Py_ssize_t i):
        return bq_fai(self._cell(i))

    def swap(self, Py_ssize_t i, int64_t v):
        return bq_swap(self._cell(i), v)

    def snapshot(self):
        return [bq_load(self.buf + i * self.stride) for i in range(self.size)]


cdef class AtomicRefArray:
    """Array of object references with atomic load/store/cas/swap.

    CAS compares by identity. Atomicity relies on the GIL: none of these
    methods releases it between the compare and the write.
    """

    cdef list cells
    cdef readonly Py_ssize_t size

    def __cinit__(self, Py_ssize_t size, object initial=None):
        if size <= 0:
            raise ValueError("size must be positive")
        self.size = size
        self.cells = [initial] * size

    def __len__(self):
        return self.size

    def load(self, Py_ssize_t i):
        return self.cells[i]

    def store(self, Py_ssize_t i, object v):
        self.cells[i] = v

    def cas(self, Py_ssize_t i, object expected, object desired):
        if self.cells[i] is expected:
            self.cells[i] = desired
            return True
        return False

    def swap(self, Py_ssize_t i, object v):
        old = self.cells[i]
        self.cells[i] = v
        return old

    def snapshot(self):
        return list(self.cells)


cdef inline int64_t _work(uint64_t *s, int64_t limit) noexcept nogil:
    cdef int64_t c = 0, it = 0
    while c < limit:
        c += <int64_t>(bq_splitmix(s) % 5) + 1
        it += 1
    return it


def random_work(uint64_t seed, int64_t limit, int64_t rounds=1):
    """Run ``rounds`` work cycles from a fresh stream; return (iterations, state)."""
    cdef uint64_t s = seed
    cdef int64_t total = 0, r
    for r in range(rounds):
        total += _work(&s, limit)
    return total, s


def llic_kernel(str impl, AtomicIntArray cells, Py_ssize_t pid, int64_t ops,
                int64_t limit, uint64_t seed):
    """Run ``ops`` rounds of (LL; work; IC; work), or (FAI; work) for ``fai``.

    ``cells`` is the shared state of the object under test. Returns
    ``(elapsed_seconds, work_iterations)`` for this thread only.
    """
    cdef int kind
    if impl == "fai":
        kind = 0
    elif impl == "cas":
        kind = 1
    elif impl == "rw":
        kind = 2
    elif impl == "mixed":
        kind = 3
    else:
        raise ValueError(f"unknown kernel {impl!r}")
    if pid < 0 or (kind == 2 and pid >= cells.size):
        raise IndexError(pid)
    if kind == 3 and cells.size < 2:
        raise ValueError("mixed kernel needs K >= 2")

    cdef int64_t *buf = cells.buf
    cdef Py_ssize_t stride = cells.stride
    cdef Py_ssize_t size = cells.size
    cdef uint64_t s = seed
    # index choices draw from their own stream so work counts match the fallback
    cdef uint64_t ps = seed ^ 0xD1B54A32D192ED03ULL
    cdef int64_t work_it = 0, i, j, v, mx, x
    cdef Py_ssize_t ind, pos
    cdef double t0, t1

    with nogil:
        t0 = bq_now()
        if kind == 0:
            for i in range(ops):
                bq_fai(buf)
                work_it += _work(&s, limit)
        elif kind == 1:
            for i in range(ops):
                mx = bq_load(buf)
                work_it += _work(&s, limit)
                if bq_load(buf) == mx:
                    bq_cas(buf, mx, mx + 1)
                work_it += _work(&s, limit)
        elif kind == 2:
            for i in range(ops):
                mx = 0
                for j in range(size):
                    v = bq_load(buf + j * stride)
                    if v > mx:
                        mx = v
                work_it += _work(&s, limit)
                v = 0
                for j in range(size):
                    x = bq_load(buf + j * stride)
                    if x > v:
                        v = x
                if v == mx:
                    bq_store(buf + pid * stride, mx + 1)
                work_it += _work(&s, limit)
        else:
            for i in range(ops):
                mx = -1
                ind = 0
                for j in range(size):
                    v = bq_load(buf + j * stride)
                    if v > mx:
                        mx = v
                        ind = j
                work_it += _work(&s, limit)
                pos = <Py_ssize_t>(bq_splitmix(&ps) % <uint64_t>(size - 1))
                if pos >= ind:
                    pos += 1
                x = bq_load(buf + pos * stride)
                if not (x < mx + 1 and bq_cas(buf + pos * stride, x, mx + 1)):
                    if bq_load(buf + ind * stride) == mx:
                        bq_cas(buf + ind * stride, mx, mx + 1)
                work_it += _work(&s, limit)
        t1 = bq_now()
    return t1 - t0, work_it
