# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled quad index kernel.

Same interface as ``pure.QuadIndex``: per-graph SPO/POS/OSP indexes over
interned integer ids, wildcard -1. Backed by std::map/std::set so match
output is deterministic (sorted by id).
"""

from libcpp.map cimport map as cmap
from libcpp.set cimport set as cset
from cython.operator cimport dereference as deref, preincrement as inc

ctypedef long long tid
ctypedef cset[tid] IdSet
ctypedef cmap[tid, IdSet] Inner
ctypedef cmap[tid, Inner] Outer
ctypedef cmap[tid, Outer] PerGraph

cdef tid WILD = -1

WILDCARD = -1


cdef class QuadIndex:
    cdef PerGraph _spo
    cdef PerGraph _pos
    cdef PerGraph _osp
    cdef cmap[tid, long long] _sizes

    def ensure_graph(self, tid g):
        self._spo[g]
        self._pos[g]
        self._osp[g]
        if self._sizes.find(g) == self._sizes.end():
            self._sizes[g] = 0

    def graphs(self):
        out = []
        cdef PerGraph.iterator it = self._spo.begin()
        while it != self._spo.end():
            out.append(deref(it).first)
            inc(it)
        return out

    def add(self, tid g, tid s, tid p, tid o):
        self.ensure_graph(g)
        if not self._spo[g][s][p].insert(o).second:
            return False
        self._pos[g][p][o].insert(s)
        self._osp[g][o][s].insert(p)
        self._sizes[g] += 1
        return True

    cdef bint _erase(self, PerGraph* idx, tid g, tid a, tid b, tid c):
        # removes c from (*idx)[g][a][b], pruning empty nodes
        cdef PerGraph.iterator git = idx.find(g)
        if git == idx.end():
            return False
        cdef Outer* outer = &deref(git).second
        cdef Outer.iterator ait = outer.find(a)
        if ait == outer.end():
            return False
        cdef Inner* inner = &deref(ait).second
        cdef Inner.iterator bit = inner.find(b)
        if bit == inner.end():
            return False
        cdef IdSet* leaf = &deref(bit).second
        if leaf.erase(c) == 0:
            return False
        if leaf.size() == 0:
            inner.erase(bit)
            if inner.size() == 0:
                outer.erase(ait)
        return True

    def discard(self, tid g, tid s, tid p, tid o):
        if not self._erase(&self._spo, g, s, p, o):
            return False
        self._erase(&self._pos, g, p, o, s)
        self._erase(&self._osp, g, o, s, p)
        self._sizes[g] -= 1
        return True

    def contains(self, tid g, tid s, tid p, tid o):
        return self._contains(g, s, p, o)

    cdef bint _contains(self, tid g, tid s, tid p, tid o):
        cdef PerGraph.iterator git = self._spo.find(g)
        if git == self._spo.end():
            return False
        cdef Outer.iterator sit = deref(git).second.find(s)
        if sit == deref(git).second.end():
            return False
        cdef Inner.iterator pit = deref(sit).second.find(p)
        if pit == deref(sit).second.end():
            return False
        return deref(pit).second.count(o) > 0

    def size(self, tid g):
        cdef cmap[tid, long long].iterator it = self._sizes.find(g)
        if it == self._sizes.end():
            return 0
        return deref(it).second

    def clear_graph(self, tid g):
        cdef long long n = 0
        cdef cmap[tid, long long].iterator it = self._sizes.find(g)
        if it != self._sizes.end():
            n = deref(it).second
        self._spo[g].clear()
        self._pos[g].clear()
        self._osp[g].clear()
        self._sizes[g] = 0
        return n

    def match(self, tid g, tid s, tid p, tid o):
        """All (s, p, o) in graph g matching the pattern; -1 is a wildcard."""
        out = []
        cdef PerGraph.iterator git
        cdef Outer* outer
        cdef Outer.iterator oit
        cdef Inner* inner
        cdef Inner.iterator iit
        cdef IdSet.iterator lit
        cdef tid a, b

        if s != WILD and p != WILD and o != WILD:
            if self._contains(g, s, p, o):
                out.append((s, p, o))
            return out

        if s != WILD and p != WILD:
            git = self._spo.find(g)
            if git == self._spo.end():
                return out
            oit = deref(git).second.find(s)
            if oit == deref(git).second.end():
                return out
            iit = deref(oit).second.find(p)
            if iit == deref(oit).second.end():
                return out
            lit = deref(iit).second.begin()
            while lit != deref(iit).second.end():
                out.append((s, p, deref(lit)))
                inc(lit)
            return out

        if s != WILD and o != WILD:
            git = self._osp.find(g)
            if git == self._osp.end():
                return out
            oit = deref(git).second.find(o)
            if oit == deref(git).second.end():
                return out
            iit = deref(oit).second.find(s)
            if iit == deref(oit).second.end():
                return out
            lit = deref(iit).second.begin()
            while lit != deref(iit).second.end():
                out.append((s, deref(lit), o))
                inc(lit)
            return out

        if p != WILD and o != WILD:
            git = self._pos.find(g)
            if git == self._pos.end():
                return out
            oit = deref(git).second.find(p)
            if oit == deref(git).second.end():
                return out
            iit = deref(oit).second.find(o)
            if iit == deref(oit).second.end():
                return out
            lit = deref(iit).second.begin()
            while lit != deref(iit).second.end():
                out.append((deref(lit), p, o))
                inc(lit)
            return out

        if s != WILD:
            git = self._spo.find(g)
            if git == self._spo.end():
                return out
            oit = deref(git).second.find(s)
            if oit == deref(git).second.end():
                return out
            iit = deref(oit).second.begin()
            while iit != deref(oit).second.end():
                a = deref(iit).first
                lit = deref(iit).second.begin()
                while lit != deref(iit).second.end():
                    out.append((s, a, deref(lit)))
                    inc(lit)
                inc(iit)
            return out

        if p != WILD:
            git = self._pos.find(g)
            if git == self._pos.end():
                return out
            oit = deref(git).second.find(p)
            if oit == deref(git).second.end():
                return out
            iit = deref(oit).second.begin()
            while iit != deref(oit).second.end():
                a = deref(iit).first
                lit = deref(iit).second.begin()
                while lit != deref(iit).second.end():
                    out.append((deref(lit), p, a))
                    inc(lit)
                inc(iit)
            return out

        if o != WILD:
            git = self._osp.find(g)
            if git == self._osp.end():
                return out
            oit = deref(git).second.find(o)
            if oit == deref(git).second.end():
                return out
            iit = deref(oit).second.begin()
            while iit != deref(oit).second.end():
                a = deref(iit).first
                lit = deref(iit).second.begin()
                while lit != deref(iit).second.end():
                    out.append((a, deref(lit), o))
                    inc(lit)
                inc(iit)
            return out

        git = self._spo.find(g)
        if git == self._spo.end():
            return out
        oit = deref(git).second.begin()
        while oit != deref(git).second.end():
            a = deref(oit).first
            iit = deref(oit).second.begin()
            while iit != deref(oit).second.end():
                b = deref(iit).first
                lit = deref(iit).second.begin()
                while lit != deref(iit).second.end():
                    out.append((a, b, deref(lit)))
                    inc(lit)
                inc(iit)
            inc(oit)
        return out
