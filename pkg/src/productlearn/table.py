"""Observation tables and the table-driven learners.

The table holds access words ``S`` (prefix-closed, starting at the empty
word), suffix words ``E`` (also containing the empty word) and one cell per
(row word, suffix) pair.  Filling queries the teacher once per undefined
cell; cells whose concatenated words coincide are still asked separately, so
query counts honestly reflect what an uncached black box would see (wrap the
teacher in :class:`~productlearn.teacher.CachingTeacher` to absorb repeats).
Rows are vectors of cells over the current ``E``; the product-aware variants
compare rows component by component under an
:class:`~productlearn.machine.OutputDecomposition`.

Two learners are built on top:

* :func:`lstar`, the classic closed/consistent loop, also available as a
  resumable generator (:func:`lstar_engine`) so a composition driver can
  multiplex several instances.
* :func:`product_lstar`, one shared table, per-component closedness and
  consistency, and one minimal hypothesis per component.

All witness scans run in a fixed order (S in insertion order, inputs in
alphabet order, E in insertion order; first hit wins) so runs are
reproducible.
"""

from .errors import DecompositionError, TableStateError
from .machine import MooreMachine, reachable_product
from .teacher import verify_counterexample

__all__ = [
    "ObservationTable",
    "lstar",
    "lstar_engine",
    "product_lstar",
]

EMPTY = ()


class ObservationTable:
    def __init__(self, inputs, decomposition=None):
        self.inputs = tuple(inputs)
        self.decomposition = decomposition
        self.S = [EMPTY]
        self.E = [EMPTY]
        self._s_set = {EMPTY}
        self._e_set = {EMPTY}
        self.cells = {}
        self._row_cache = {}
        self._comp_cache = {}

    @property
    def arity(self):
        return 1 if self.decomposition is None else self.decomposition.arity

    def domain(self):
        """All row words: S first, then the one-symbol extensions not in S."""
        rows = list(self.S)
        seen = set(self._s_set)
        for s in self.S:
            for a in self.inputs:
                u = s + (a,)
                if u not in seen:
                    seen.add(u)
                    rows.append(u)
        return rows

    def extensions(self):
        """The S·I row words in scan order, including those already in S."""
        return [s + (a,) for s in self.S for a in self.inputs]

    def missing_cells(self):
        return [
            (r, e)
            for r in self.domain()
            for e in self.E
            if (r, e) not in self.cells
        ]

    def set_cell(self, key, value):
        self.cells[key] = tuple(value)

    def fill(self, teacher):
        """Ask the teacher once for every cell not yet defined."""
        for r, e in self.missing_cells():
            self.set_cell((r, e), teacher.mq(r + e))

    def cell(self, r, e):
        return self.cells[(r, e)]

    def row(self, r):
        cached = self._row_cache.get(r)
        if cached is None:
            cached = tuple(self.cells[(r, e)] for e in self.E)
            self._row_cache[r] = cached
        return cached

    def component_row(self, i, r):
        key = (i, r)
        cached = self._comp_cache.get(key)
        if cached is None:
            d = self._require_decomposition()
            cached = tuple(d.project(i, self.cells[(r, e)]) for e in self.E)
            self._comp_cache[key] = cached
        return cached

    def _require_decomposition(self):
        if self.decomposition is None:
            raise DecompositionError("this table has no output decomposition")
        return self.decomposition

    def add_row(self, word):
        if word in self._s_set:
            return False
        assert word == EMPTY or word[:-1] in self._s_set, "S must stay prefix-closed"
        self.S.append(word)
        self._s_set.add(word)
        return True

    def add_column(self, word):
        if word in self._e_set:
            return False
        self.E.append(word)
        self._e_set.add(word)
        self._row_cache.clear()
        self._comp_cache.clear()
        return True

    def add_counterexample(self, word):
        """Add the word and all its prefixes to S, shortest first."""
        word = tuple(word)
        for k in range(1, len(word) + 1):
            self.add_row(word[:k])

    # -- classic conditions ------------------------------------------------

    def closedness_defect(self):
        """First extension row that matches no S row, or None if closed."""
        s_rows = {self.row(s) for s in self.S}
        for u in self.extensions():
            if u in self._s_set:
                continue
            if self.row(u) not in s_rows:
                return u
        return None

    def consistency_defect(self):
        """First (s, s', a, e) where equal rows get unequal successors."""
        groups = {}
        for idx, s in enumerate(self.S):
            groups.setdefault(self.row(s), []).append(idx)
        pairs = sorted(
            (i, j)
            for members in groups.values()
            for n, i in enumerate(members)
            for j in members[n + 1 :]
        )
        for i, j in pairs:
            s, s2 = self.S[i], self.S[j]
            for a in self.inputs:
                for e in self.E:
                    if self.cells[(s + (a,), e)] != self.cells[(s2 + (a,), e)]:
                        return (s, s2, a, e)
        return None

    # -- component-wise conditions -----------------------------------------

    def product_closedness_defect(self):
        """First (component, extension row) with no matching S row in that
        component, or None.  Rows are scanned outer, components inner."""
        d = self._require_decomposition()
        s_rows = [
            {self.component_row(i, s) for s in self.S} for i in range(d.arity)
        ]
        for u in self.extensions():
            if u in self._s_set:
                continue
            for i in range(d.arity):
                if self.component_row(i, u) not in s_rows[i]:
                    return (i, u)
        return None

    def product_consistency_defect(self):
        """First (component, s, s', a, e) violating per-component consistency."""
        d = self._require_decomposition()
        candidates = set()
        per_component_groups = []
        for i in range(d.arity):
            groups = {}
            for idx, s in enumerate(self.S):
                groups.setdefault(self.component_row(i, s), []).append(idx)
            per_component_groups.append(groups)
            for members in groups.values():
                for n, a_idx in enumerate(members):
                    for b_idx in members[n + 1 :]:
                        candidates.add((a_idx, b_idx))
        for i_idx, j_idx in sorted(candidates):
            s, s2 = self.S[i_idx], self.S[j_idx]
            for i in range(d.arity):
                if self.component_row(i, s) != self.component_row(i, s2):
                    continue
                for a in self.inputs:
                    for e in self.E:
                        left = d.project(i, self.cells[(s + (a,), e)])
                        right = d.project(i, self.cells[(s2 + (a,), e)])
                        if left != right:
                            return (i, s, s2, a, e)
        return None

    # -- hypotheses ----------------------------------------------------------

    def _build(self, row_of, out_of):
        classes = {}
        reps = []
        for s in self.S:
            r = row_of(s)
            if r not in classes:
                classes[r] = len(reps)
                reps.append(s)
        transitions = []
        for w in reps:
            dest = []
            for a in self.inputs:
                target = classes.get(row_of(w + (a,)))
                if target is None:
                    raise TableStateError("table is not closed for this view")
                dest.append(target)
            transitions.append(dest)
        outputs = [out_of(w) for w in reps]
        names = [" ".join(map(str, w)) if w else "ε" for w in reps]
        return MooreMachine(self.inputs, transitions, outputs, classes[row_of(EMPTY)], names)

    def hypothesis(self):
        """The machine whose states are the distinct S rows.

        Requires the table to be closed and consistent; agrees with every
        filled cell.
        """
        if self.closedness_defect() is not None:
            raise TableStateError("cannot build a hypothesis from an unclosed table")
        if self.consistency_defect() is not None:
            raise TableStateError("cannot build a hypothesis from an inconsistent table")
        return self._build(self.row, lambda w: self.cells[(w, EMPTY)])

    def product_hypothesis(self):
        """One minimal machine per component, plus their reachable product.

        Requires product-closedness and product-consistency.  The product's
        outputs are reassembled into the original atom order, so it agrees
        with every filled cell of the full table.
        """
        d = self._require_decomposition()
        if self.product_closedness_defect() is not None:
            raise TableStateError("cannot build hypotheses from a non-product-closed table")
        if self.product_consistency_defect() is not None:
            raise TableStateError("cannot build hypotheses from a non-product-consistent table")
        components = [
            self._build(
                lambda w, i=i: self.component_row(i, w),
                lambda w, i=i: d.project(i, self.cells[(w, EMPTY)]),
            )
            for i in range(d.arity)
        ]
        return components, reachable_product(components, d)

    def component_view(self, i):
        """A standalone single-component copy of this table.

        The copy answers with the projected cells, so the classic conditions
        on it coincide with the component-wise conditions here.
        """
        d = self._require_decomposition()
        view = ObservationTable(self.inputs)
        view.S = list(self.S)
        view._s_set = set(self._s_set)
        view.E = list(self.E)
        view._e_set = set(self._e_set)
        view.cells = {key: d.project(i, o) for key, o in self.cells.items()}
        return view

    def __repr__(self):
        return (
            f"ObservationTable(|S|={len(self.S)}, |E|={len(self.E)}, "
            f"{len(self.cells)} cells filled)"
        )


def _fill_events(table):
    for r, e in table.missing_cells():
        answer = yield ("mq", r + e)
        table.set_cell((r, e), answer)


def lstar_engine(inputs, observer=None):
    """Classic learner as a resumable generator.

    Yields ``("mq", word)`` events expecting the output tuple in reply, and
    ``("eq", machine)`` events expecting either ``None`` (accept; the
    generator then returns the machine) or a counterexample word.  The caller
    is responsible for only sending genuine counterexamples.
    """
    table = ObservationTable(inputs)
    yield from _fill_events(table)
    if observer is not None:
        observer(table)
    while True:
        while True:
            defect = False
            u = table.closedness_defect()
            if u is not None:
                defect = True
                table.add_row(u)
                yield from _fill_events(table)
                if observer is not None:
                    observer(table)
            w = table.consistency_defect()
            if w is not None:
                defect = True
                _, _, a, e = w
                table.add_column((a,) + e)
                yield from _fill_events(table)
                if observer is not None:
                    observer(table)
            if not defect:
                break
        hyp = table.hypothesis()
        cex = yield ("eq", hyp)
        if cex is None:
            return hyp
        table.add_counterexample(cex)
        yield from _fill_events(table)
        if observer is not None:
            observer(table)


def lstar(teacher, inputs, observer=None, hypothesis_log=None):
    """Learn a machine equivalent to the teacher's hidden target.

    `observer`, when given, is called with the table after every fill;
    `hypothesis_log`, when given, collects the state count of every
    hypothesis submitted for an equivalence query.
    """
    engine = lstar_engine(inputs, observer)
    event = next(engine)
    try:
        while True:
            kind, payload = event
            if kind == "mq":
                event = engine.send(teacher.mq(payload))
            else:
                if hypothesis_log is not None:
                    hypothesis_log.append(payload.n_states)
                cex = teacher.eq(payload)
                if cex is None:
                    event = engine.send(None)
                else:
                    verify_counterexample(payload, cex)
                    event = engine.send(tuple(cex.word))
    except StopIteration as stop:
        return stop.value


def product_lstar(teacher, inputs, decomposition, observer=None, hypothesis_log=None):
    """Learn all components of a product-structured target from one table.

    Returns ``(components, machine)`` where `machine` is the reachable part
    of the component product, certified by the final equivalence query.
    """
    table = ObservationTable(inputs, decomposition)
    table.fill(teacher)
    if observer is not None:
        observer(table)
    while True:
        while True:
            defect = False
            witness = table.product_closedness_defect()
            if witness is not None:
                defect = True
                table.add_row(witness[1])
                table.fill(teacher)
                if observer is not None:
                    observer(table)
            witness = table.product_consistency_defect()
            if witness is not None:
                defect = True
                _, _, _, a, e = witness
                table.add_column((a,) + e)
                table.fill(teacher)
                if observer is not None:
                    observer(table)
            if not defect:
                break
        components, hyp = table.product_hypothesis()
        if hypothesis_log is not None:
            hypothesis_log.append(hyp.n_states)
        cex = teacher.eq(hyp)
        if cex is None:
            return components, hyp
        verify_counterexample(hyp, cex)
        table.add_counterexample(cex.word)
        table.fill(teacher)
        if observer is not None:
            observer(table)
