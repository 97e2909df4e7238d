"""Fusion rings: finite label sets with non-negative integer structure constants."""

from __future__ import annotations

__all__ = ["FusionRing"]


class FusionRing:
    """N[i, j] is a dict label -> multiplicity for the product i (x) j."""

    def __init__(self, labels, unit, products):
        self.labels = list(labels)
        self.unit = unit
        self.N = {}
        for (i, j), outcome in products.items():
            self.N[(i, j)] = {k: int(m) for k, m in outcome.items() if m}

    def product(self, i, j) -> dict:
        return self.N[(i, j)]

    def constant(self, i, j, k) -> int:
        return self.N[(i, j)].get(k, 0)

    def is_commutative(self) -> bool:
        return all(self.N[(i, j)] == self.N[(j, i)] for i in self.labels for j in self.labels)

    def unit_ok(self) -> bool:
        return all(
            self.N[(self.unit, i)] == {i: 1} and self.N[(i, self.unit)] == {i: 1}
            for i in self.labels
        )

    def is_associative(self) -> bool:
        for i in self.labels:
            for j in self.labels:
                for k in self.labels:
                    left = {}
                    for m, c in self.N[(i, j)].items():
                        for l, c2 in self.N[(m, k)].items():
                            left[l] = left.get(l, 0) + c * c2
                    right = {}
                    for m, c in self.N[(j, k)].items():
                        for l, c2 in self.N[(i, m)].items():
                            right[l] = right.get(l, 0) + c * c2
                    if left != right:
                        return False
        return True

    def rigid_dual_ok(self, dual) -> bool:
        """Each label pairs with its dual to contain the unit exactly once."""
        for i in self.labels:
            if self.constant(i, dual(i), self.unit) != 1:
                return False
        return True

    def dimension_homomorphism_ok(self, dim) -> bool:
        """dim(i)*dim(j) = sum_k N(i,j,k) dim(k), exactly in the coefficient field."""
        for i in self.labels:
            for j in self.labels:
                lhs = dim(i) * dim(j)
                rhs = None
                for k, m in self.N[(i, j)].items():
                    term = dim(k) * m
                    rhs = term if rhs is None else rhs + term
                if rhs is None or not lhs == rhs:
                    return False
        return True

    def isomorphic_under(self, other: "FusionRing", label_map) -> bool:
        """label_map: bijection self.labels -> other.labels matching all constants."""
        image = [label_map(i) for i in self.labels]
        if len(set(image)) != len(self.labels) or set(image) != set(other.labels):
            return False
        if label_map(self.unit) != other.unit:
            return False
        for i in self.labels:
            for j in self.labels:
                expected = {label_map(k): m for k, m in self.N[(i, j)].items()}
                if expected != other.N[(label_map(i), label_map(j))]:
                    return False
        return True

    def __repr__(self):
        return f"FusionRing({len(self.labels)} labels, unit={self.unit!r})"
