"""scikit-learn style facade over classify / same_orbit.

Rows of X are cubic maps: RationalMap objects, map literals, or rows of an
(n, 8) complex array (p3, p2, p1, p0, q3, q2, q1, q0).
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .algebra import ToleranceConfig
from .invariants import STRATA, classify
from .ratmap import RationalMap, make_map, parse_map_literal


def check_map_array(X, tol):
    """Coerce X to a list of RationalMap."""
    if isinstance(X, (RationalMap, str)):
        X = [X]
    if isinstance(X, np.ndarray):
        if X.ndim != 2 or X.shape[1] % 2 or X.shape[1] < 4:
            raise ValueError(f"expected an (n, 2d+2) coefficient array, got shape {X.shape}")
        h = X.shape[1] // 2
        return [make_map(row[:h], row[h:], tol) for row in X.astype(complex)]
    out = []
    for item in X:
        if isinstance(item, RationalMap):
            out.append(item)
        elif isinstance(item, str):
            out.append(parse_map_literal(item, tol))
        else:
            row = np.asarray(item, dtype=complex).ravel()
            if row.size % 2 or row.size < 4:
                raise ValueError(f"coefficient row of odd or too small length {row.size}")
            out.append(make_map(row[:row.size // 2], row[row.size // 2:], tol))
    if not out:
        raise ValueError("no maps given")
    return out


class OrbitClassifier(TransformerMixin, BaseEstimator):
    """Orbit invariants of cubic maps.

    fit records the distinct orbits seen in X; transform returns
    [Re pi, Im pi] per map; predict returns the stratum name and
    predict_orbit the index of the matching fitted orbit (-1 if none).
    """

    def __init__(self, eq_rel=1e-9, cluster_chordal=1e-6, rank_rel=1e-10,
                 exceptional_tol=1e-6, pi_tol=1e-6):
        self.eq_rel = eq_rel
        self.cluster_chordal = cluster_chordal
        self.rank_rel = rank_rel
        self.exceptional_tol = exceptional_tol
        self.pi_tol = pi_tol

    def _tol(self):
        return ToleranceConfig(self.eq_rel, self.cluster_chordal, self.rank_rel)

    def _classes(self, X):
        tol = self._tol()
        return [classify(f, tol, self.exceptional_tol) for f in check_map_array(X, tol)]

    def _match(self, cls):
        for k, (stratum, pi) in enumerate(self.orbits_):
            if stratum != cls.stratum:
                continue
            if stratum != "OpenStratum" or abs(pi - cls.pi) <= self.pi_tol * (1 + abs(pi)):
                return k
        return -1

    def fit(self, X, y=None):
        classes = self._classes(X)
        self.classes_ = np.array(STRATA)
        self.orbits_ = []
        for c in classes:
            if self._match(c) < 0:
                self.orbits_.append((c.stratum, c.pi))
        self.n_orbits_ = len(self.orbits_)
        return self

    def transform(self, X):
        check_is_fitted(self, "orbits_")
        pis = np.array([c.pi for c in self._classes(X)], dtype=complex)
        return np.column_stack([pis.real, pis.imag])

    def predict(self, X):
        check_is_fitted(self, "orbits_")
        return np.array([c.stratum for c in self._classes(X)])

    def predict_orbit(self, X):
        check_is_fitted(self, "orbits_")
        return np.array([self._match(c) for c in self._classes(X)], dtype=int)

    def same_orbit(self, f, g):
        """Pairwise orbit test with this estimator's tolerances."""
        a, b = self._classes([f, g])
        if a.stratum != b.stratum:
            return False
        return a.stratum != "OpenStratum" or abs(a.pi - b.pi) <= self.pi_tol * (1 + abs(a.pi))
