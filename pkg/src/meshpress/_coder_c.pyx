# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled range coder core; bit-exact twin of ``_coder_py``."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport uint8_t, uint32_t, uint64_t, int64_t

BACKEND_NAME = "cython"

cdef uint64_t _TOP = 1 << 24
cdef uint64_t _MASK32 = 0xFFFFFFFF


cdef class AdaptiveModel:
    cdef public int n
    cdef uint32_t* _freq
    cdef public uint64_t total
    cdef public uint64_t limit
    cdef public uint64_t inc

    def __cinit__(self, int alphabet_size, uint64_t rescale_limit=1 << 14,
                  uint64_t increment=32):
        if alphabet_size < 1:
            raise ValueError("alphabet must be non-empty")
        self.n = alphabet_size
        self._freq = <uint32_t*>malloc(alphabet_size * sizeof(uint32_t))
        if self._freq == NULL:
            raise MemoryError()
        cdef int i
        for i in range(alphabet_size):
            self._freq[i] = 1
        self.total = alphabet_size
        self.limit = rescale_limit
        self.inc = increment

    def __dealloc__(self):
        if self._freq != NULL:
            free(self._freq)

    @property
    def freq(self):
        return [self._freq[i] for i in range(self.n)]

    cdef uint64_t cum_below_c(self, int sym):
        cdef uint64_t cum = 0
        cdef int i
        for i in range(sym):
            cum += self._freq[i]
        return cum

    def cum_below(self, int sym):
        return self.cum_below_c(sym)

    cdef void update_c(self, int sym):
        self._freq[sym] += <uint32_t>self.inc
        self.total += self.inc
        cdef uint64_t total
        cdef int i
        if self.total > self.limit:
            total = 0
            for i in range(self.n):
                self._freq[i] = (self._freq[i] + 1) >> 1
                total += self._freq[i]
            self.total = total

    def update(self, int sym):
        self.update_c(sym)

    def find(self, uint64_t dv):
        cdef uint64_t cum = 0
        cdef int sym
        for sym in range(self.n):
            if cum + self._freq[sym] > dv:
                return sym, cum
            cum += self._freq[sym]
        return self.n - 1, cum - self._freq[self.n - 1]


cdef class RangeEncoder:
    cdef uint64_t _low
    cdef uint64_t _range
    cdef uint64_t _cache
    cdef uint64_t _cache_size
    cdef bytearray _out

    def __cinit__(self):
        self._low = 0
        self._range = _MASK32
        self._cache = 0
        self._cache_size = 1
        self._out = bytearray()

    cdef void _shift_low(self):
        cdef uint64_t low = self._low
        cdef uint64_t carry, i
        if low < 0xFF000000 or low > _MASK32:
            carry = low >> 32
            self._out.append(<uint8_t>((self._cache + carry) & 0xFF))
            for i in range(self._cache_size - 1):
                self._out.append(<uint8_t>((0xFF + carry) & 0xFF))
            self._cache = (low >> 24) & 0xFF
            self._cache_size = 0
        self._cache_size += 1
        self._low = (low << 8) & _MASK32

    def encode_symbol(self, AdaptiveModel model, int sym):
        if sym < 0 or sym >= model.n:
            raise ValueError(f"symbol {sym} outside alphabet of {model.n}")
        cdef uint64_t r = self._range // model.total
        self._low += r * model.cum_below_c(sym)
        self._range = r * model._freq[sym]
        while self._range < _TOP:
            self._range <<= 8
            self._shift_low()
        model.update_c(sym)

    def encode_raw(self, uint64_t value, int nbits):
        cdef int i
        cdef uint64_t r
        for i in range(nbits - 1, -1, -1):
            r = self._range >> 1
            if (value >> i) & 1:
                self._low += r
                self._range -= r
            else:
                self._range = r
            while self._range < _TOP:
                self._range <<= 8
                self._shift_low()

    def finish(self):
        # Any code point in [low, low + range) decodes to the same symbol
        # sequence, and the decoder zero-pads past the end of the stream;
        # pick the point with the most trailing zero bytes and drop them.
        cdef uint64_t low = self._low
        cdef uint64_t rng = self._range
        cdef uint64_t mod, c
        cdef int i, k
        for k in range(4, 0, -1):
            mod = (<uint64_t>1) << (8 * k)
            c = (low + mod - 1) // mod * mod
            if c - low < rng:
                self._low = c
                break
        for i in range(5):
            self._shift_low()
        return bytes(self._out).rstrip(b"\x00")


cdef class RangeDecoder:
    cdef bytes _buf
    cdef const uint8_t* _data
    cdef Py_ssize_t _len
    cdef Py_ssize_t _pos
    cdef uint64_t _range
    cdef uint64_t _code

    def __cinit__(self, data):
        self._buf = bytes(data)
        self._data = self._buf
        self._len = len(self._buf)
        self._pos = 0
        self._range = _MASK32
        self._code = 0
        cdef int i
        for i in range(5):
            self._code = ((self._code << 8) | self._next_byte()) & _MASK32

    cdef uint64_t _next_byte(self):
        cdef uint64_t b = 0
        if self._pos < self._len:
            b = self._data[self._pos]
        self._pos += 1
        return b

    def decode_symbol(self, AdaptiveModel model):
        cdef uint64_t r = self._range // model.total
        cdef uint64_t dv = self._code // r
        if dv >= model.total:
            dv = model.total - 1
        cdef uint64_t cum = 0
        cdef int sym = model.n - 1
        cdef int i
        for i in range(model.n):
            if cum + model._freq[i] > dv:
                sym = i
                break
            cum += model._freq[i]
        self._code -= r * cum
        self._range = r * model._freq[sym]
        while self._range < _TOP:
            self._range <<= 8
            self._code = ((self._code << 8) | self._next_byte()) & _MASK32
        model.update_c(sym)
        return sym

    def decode_raw(self, int nbits):
        cdef uint64_t value = 0
        cdef uint64_t r
        cdef int bit, i
        for i in range(nbits):
            r = self._range >> 1
            if self._code >= r:
                bit = 1
                self._code -= r
                self._range -= r
            else:
                bit = 0
                self._range = r
            while self._range < _TOP:
                self._range <<= 8
                self._code = ((self._code << 8) | self._next_byte()) & _MASK32
            value = (value << 1) | bit
        return value
