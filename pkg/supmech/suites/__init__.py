"""Verification suites: seeded property checks grouped by subject."""

from .calculus import run_calculus
from .dynamics import run_dynamics_suite
from .symplectic import run_symplectic
from .tensor import run_tensor

CALCULUS = "calculus"
SYMPLECTIC = "symplectic"
TENSOR = "tensor"
DYNAMICS = "dynamics"

TARGETS = (CALCULUS, SYMPLECTIC, TENSOR, DYNAMICS)

# single-algebra suites; the tensor suite takes a pair and is dispatched separately
SUITES = {
    CALCULUS: run_calculus,
    SYMPLECTIC: run_symplectic,
    DYNAMICS: run_dynamics_suite,
}

DEFAULT_ALGEBRAS = {
    CALCULUS: "matrix:2",
    SYMPLECTIC: "matrix:2",
    TENSOR: "matrix:2,matrix:2",
    DYNAMICS: "matrix:2",
}
