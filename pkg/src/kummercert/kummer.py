"""The rank-8 lattice model behind the Kummer-fourfold torsion certificate.

The cyclic permutation of three torus factors, transported to A x A along
(x, y) |-> (x, y, -x - y), acts on the degree-1 cohomology lattice Z^8 of
A x A.  On each of the four rank-2 sublattices spanned by a pair of dual
degree-1 classes it acts by the standard order-3 matrix

    [[-1, 1],
     [-1, 0]]

(the convention with s(x, y) = (y, -x - y); the other generator gives a
conjugate action, and every invariant computed here is checked to agree
for both).  Degree-k cohomology is the k-th exterior power of this
lattice.  From the model we extract:

* the block-count table for k = 1..4, computed independently through the
  integral compound matrix and through the closed-form exterior-power
  calculus, with a hard mismatch error if the two routes ever disagree;
* the vanishing certificate: the group cohomology H^p(Z/3, -) of the
  exterior-power lattices, for every p >= 1 with p + q in {3, 5}, all of
  which must be zero;
* the ranks of the fixed sublattices, which are the edge terms consumed
  by the quotient-torsion argument.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .cohomology import LatticeAction, cohomology_snf, jordan_type_mod3
from .jordan import JordanType, wedge
from .linalg import FinAbGroup, IntMatrix, exterior_power, kernel_basis

__all__ = [
    "CertificateFailure",
    "KummerContext",
    "MismatchError",
    "VANISHING_PAIRS",
    "VanishingEntry",
    "build_context",
    "build_sigma_h1",
    "ell_table",
    "ell_table_routes",
    "fixed_rank_table",
    "vanishing_certificate",
]


class MismatchError(RuntimeError):
    """The two independent computation routes disagree (a bug, not bad input)."""


class CertificateFailure(RuntimeError):
    """A certificate entry that must vanish is non-zero."""


SIGMA_BLOCK = ((-1, 1), (-1, 0))

# Group cohomology degrees p >= 1 with p + q in {3, 5}: everything the
# quotient argument needs in total degrees 3 and 5.
VANISHING_PAIRS = ((1, 2), (2, 1), (3, 0), (1, 4), (2, 3), (3, 2), (4, 1), (5, 0))

_EXPECTED_H1_TYPE = JordanType(0, 4, 0)


def build_sigma_h1() -> LatticeAction:
    """The order-3 action on the degree-1 lattice Z^8 of A x A."""
    block = IntMatrix(SIGMA_BLOCK)
    action = LatticeAction(IntMatrix.block_diag([block] * 4))
    # The sign convention must produce order 3 with no fixed vectors and
    # four size-2 blocks mod 3; anything else means the model is wrong.
    assert jordan_type_mod3(action) == _EXPECTED_H1_TYPE
    assert kernel_basis(action.shifted()).cols == 0
    return action


def coefficient_action(action: LatticeAction, q: int) -> LatticeAction:
    """The induced action on the degree-q lattice (the q-th exterior power)."""
    return LatticeAction(exterior_power(action.matrix, q))


def ell_table_routes(
    action: LatticeAction | None = None,
) -> tuple[dict[int, JordanType], dict[int, JordanType]]:
    """Block counts for k = 1..4 by the matrix route and by the closed form."""
    if action is None:
        action = build_sigma_h1()
    matrix_route = {
        k: jordan_type_mod3(coefficient_action(action, k)) for k in range(1, 5)
    }
    base = jordan_type_mod3(action)
    closed_route = {k: wedge(base, k) for k in range(1, 5)}
    return matrix_route, closed_route


def ell_table(action: LatticeAction | None = None) -> dict[int, JordanType]:
    """The certified block-count table; both routes must agree."""
    matrix_route, closed_route = ell_table_routes(action)
    if matrix_route != closed_route:
        raise MismatchError(
            f"exterior-power route {matrix_route} != closed-form route {closed_route}"
        )
    return matrix_route


@dataclass(frozen=True)
class VanishingEntry:
    p: int
    q: int
    group: FinAbGroup

    def to_json_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "group": self.group.to_json_dict()}


def vanishing_certificate(action: LatticeAction | None = None) -> tuple[VanishingEntry, ...]:
    """Compute all certificate groups; raise on the first non-zero entry."""
    if action is None:
        action = build_sigma_h1()
    coefficients = {q: coefficient_action(action, q) for q in sorted({q for _, q in VANISHING_PAIRS})}
    entries = tuple(
        VanishingEntry(p, q, cohomology_snf(coefficients[q], p)) for p, q in VANISHING_PAIRS
    )
    for entry in entries:
        if not entry.group.is_zero:
            raise CertificateFailure(
                f"H^{entry.p}(A3, H^{entry.q}) = {entry.group}, expected 0"
            )
    return entries


def fixed_rank_table(
    action: LatticeAction | None = None, degrees: tuple[int, ...] = (0, 1, 2, 3, 4, 5)
) -> dict[int, int]:
    """Rank of the fixed sublattice of the degree-q exterior power."""
    if action is None:
        action = build_sigma_h1()
    out = {}
    for q in degrees:
        out[q] = kernel_basis(coefficient_action(action, q).shifted()).cols
    return out


@dataclass(frozen=True)
class KummerContext:
    """Everything the certificate checker consumes, as one immutable value."""

    sigma_h1: LatticeAction
    ell: dict[int, JordanType]
    vanishing: tuple[VanishingEntry, ...]
    fixed_ranks: dict[int, int]

    def to_json_dict(self) -> dict:
        return {
            "sigma_h1": self.sigma_h1.matrix.to_lists(),
            "ell_table": {str(k): t.to_json_dict() for k, t in sorted(self.ell.items())},
            "vanishing": [e.to_json_dict() for e in self.vanishing],
            "fixed_ranks": {str(q): r for q, r in sorted(self.fixed_ranks.items())},
        }

    def content_tag(self) -> str:
        """Short digest of the computed content, for tagging emitted facts."""
        blob = json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def build_context() -> KummerContext:
    action = build_sigma_h1()
    return KummerContext(
        sigma_h1=action,
        ell=ell_table(action),
        vanishing=vanishing_certificate(action),
        fixed_ranks=fixed_rank_table(action),
    )
