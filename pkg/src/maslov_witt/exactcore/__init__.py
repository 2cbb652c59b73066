from .field import DomainError, Field, FpElement, legendre, squarefree_part
from .matrix import Matrix, RREF, congruence_diagonal, congruence_diagonalize
from .symbols import INF, hilbert_symbol, relevant_places


def square_class(a, field: Field | None = None) -> int:
    """Canonical square-class representative of a nonzero scalar."""
    if field is None:
        field = a_field(a)
    return field.square_class(a)


def a_field(a) -> Field:
    if isinstance(a, FpElement):
        return Field.GF(a.p)
    return Field.Q()


def rref(M: Matrix) -> RREF:
    return M.rref()


__all__ = [
    "DomainError", "Field", "FpElement", "INF", "Matrix", "RREF",
    "congruence_diagonal", "congruence_diagonalize", "hilbert_symbol", "legendre", "relevant_places",
    "rref", "square_class", "squarefree_part",
]
