"""Pure-Python quad index kernel.

Terms arrive already interned to non-negative integers; this layer only
maintains, per graph, the three nested-dict indexes (SPO, POS, OSP) and
answers wildcard pattern matches. -1 marks a wildcard position.

The compiled kernel in ``_native.pyx`` implements the identical
interface; the two must stay behaviour-equivalent (the store's tests run
against both).
"""

from __future__ import annotations

WILDCARD = -1


class QuadIndex:
    __slots__ = ("_graphs", "_sizes")

    def __init__(self):
        # graph id -> (spo, pos, osp) nested dicts
        self._graphs: dict[int, tuple[dict, dict, dict]] = {}
        self._sizes: dict[int, int] = {}

    def ensure_graph(self, g: int) -> None:
        if g not in self._graphs:
            self._graphs[g] = ({}, {}, {})
            self._sizes[g] = 0

    def graphs(self) -> list[int]:
        return list(self._graphs)

    def add(self, g: int, s: int, p: int, o: int) -> bool:
        self.ensure_graph(g)
        spo, pos, osp = self._graphs[g]
        objs = spo.setdefault(s, {}).setdefault(p, set())
        if o in objs:
            return False
        objs.add(o)
        pos.setdefault(p, {}).setdefault(o, set()).add(s)
        osp.setdefault(o, {}).setdefault(s, set()).add(p)
        self._sizes[g] += 1
        return True

    def discard(self, g: int, s: int, p: int, o: int) -> bool:
        if g not in self._graphs:
            return False
        spo, pos, osp = self._graphs[g]
        try:
            objs = spo[s][p]
        except KeyError:
            return False
        if o not in objs:
            return False
        objs.remove(o)
        if not objs:
            del spo[s][p]
            if not spo[s]:
                del spo[s]
        pos[p][o].remove(s)
        if not pos[p][o]:
            del pos[p][o]
            if not pos[p]:
                del pos[p]
        osp[o][s].remove(p)
        if not osp[o][s]:
            del osp[o][s]
            if not osp[o]:
                del osp[o]
        self._sizes[g] -= 1
        return True

    def contains(self, g: int, s: int, p: int, o: int) -> bool:
        if g not in self._graphs:
            return False
        spo = self._graphs[g][0]
        return o in spo.get(s, {}).get(p, ())

    def size(self, g: int) -> int:
        return self._sizes.get(g, 0)

    def clear_graph(self, g: int) -> int:
        if g not in self._graphs:
            return 0
        n = self._sizes[g]
        self._graphs[g] = ({}, {}, {})
        self._sizes[g] = 0
        return n

    def match(self, g: int, s: int, p: int, o: int) -> list[tuple[int, int, int]]:
        """All (s, p, o) in graph g matching the pattern; -1 is a wildcard."""
        if g not in self._graphs:
            return []
        spo, pos, osp = self._graphs[g]
        out = []
        if s != WILDCARD:
            if p != WILDCARD:
                if o != WILDCARD:
                    if self.contains(g, s, p, o):
                        out.append((s, p, o))
                else:
                    for oo in spo.get(s, {}).get(p, ()):
                        out.append((s, p, oo))
            else:
                if o != WILDCARD:
                    for pp in osp.get(o, {}).get(s, ()):
                        out.append((s, pp, o))
                else:
                    for pp, objs in spo.get(s, {}).items():
                        for oo in objs:
                            out.append((s, pp, oo))
        else:
            if p != WILDCARD:
                if o != WILDCARD:
                    for ss in pos.get(p, {}).get(o, ()):
                        out.append((ss, p, o))
                else:
                    for oo, subs in pos.get(p, {}).items():
                        for ss in subs:
                            out.append((ss, p, oo))
            else:
                if o != WILDCARD:
                    for ss, preds in osp.get(o, {}).items():
                        for pp in preds:
                            out.append((ss, pp, o))
                else:
                    for ss, pmap in spo.items():
                        for pp, objs in pmap.items():
                            for oo in objs:
                                out.append((ss, pp, oo))
        return out
