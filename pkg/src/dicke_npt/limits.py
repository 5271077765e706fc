"""Size limits for dense (full Hilbert space) arrays."""

import os

ENV_DENSE_LIMIT = "DICKE_NPT_DENSE_LIMIT"

# amplitudes of a dense state vector, d**n
DENSE_VECTOR_LIMIT = 4**10
# side length of a dense matrix, d**m
DENSE_MATRIX_LIMIT = 4096


class DenseLimitError(ValueError):
    """A dense array would exceed the configured size limit."""

    def __init__(self, what, dimension, limit):
        super().__init__(f"{what} dimension {dimension} exceeds dense limit {limit}")
        self.dimension = dimension
        self.limit = limit


def vector_limit(limit=None):
    """Resolve the vector limit: explicit argument, then environment, then default."""
    if limit is not None:
        return int(limit)
    env = os.environ.get(ENV_DENSE_LIMIT)
    if env:
        return int(env)
    return DENSE_VECTOR_LIMIT


def check_vector(dimension, limit=None):
    lim = vector_limit(limit)
    if dimension > lim:
        raise DenseLimitError("vector", dimension, lim)


def check_matrix(dimension, limit=None):
    lim = DENSE_MATRIX_LIMIT if limit is None else int(limit)
    if dimension > lim:
        raise DenseLimitError("matrix", dimension, lim)
