"""Dense 2-D tensors with tape-based reverse-mode differentiation.

A :class:`Tape` owns every tensor created through it. Leaves enter via
:meth:`Tape.param` (trainable, named) or :meth:`Tape.const`; each operation
computes its value eagerly and, when recording is on, appends one node to
the tape. :meth:`Tape.backward` replays the record in reverse topological
order (which is simply reverse creation order) and returns one gradient per
trainable leaf.

Conventions that matter downstream:

* everything is float64;
* the relu subgradient at exactly 0 is 0 (masking often produces exact zeros);
* log-softmax subtracts the row max before exponentiating;
* the tape is append-only, so calling backward twice gives identical results.

A tape must stay on one thread; independent tapes may run concurrently.
"""

from __future__ import annotations

import numpy as np

from . import kernels as K

_UNRECORDED = -1


class ShapeError(ValueError):
    """Operand shapes incompatible for a tape operation."""

    def __init__(self, op: str, *shapes):
        msg = f"{op}: incompatible shapes " + " and ".join(str(tuple(s)) for s in shapes)
        super().__init__(msg)
        self.op = op
        self.shapes = tuple(tuple(s) for s in shapes)


class Tensor:
    """Handle to a (rows, cols) float64 value living on a tape."""

    __slots__ = ("value", "tape", "index")

    def __init__(self, value: np.ndarray, tape: "Tape", index: int):
        self.value = value
        self.tape = tape
        self.index = index

    @property
    def shape(self):
        return self.value.shape

    @property
    def rows(self) -> int:
        return self.value.shape[0]

    @property
    def cols(self) -> int:
        return self.value.shape[1]

    def __repr__(self):
        return f"Tensor(shape={self.value.shape}, index={self.index})"


def _as_matrix(value, what: str) -> np.ndarray:
    arr = np.array(value, dtype=np.float64, order="C")
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{what}: expected a 2-D matrix with positive dims, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{what}: non-finite entries")
    return arr


class Tape:
    """Single-threaded record of tensor operations supporting backward().

    With ``record=False`` the ops still compute values (useful for cheap
    evaluation passes) but nothing is recorded and backward() refuses to run.
    """

    def __init__(self, record: bool = True):
        self.record = record
        self._nodes: list[tuple] = []
        self._count = 0
        self._params: dict[str, Tensor] = {}

    # -- leaves ---------------------------------------------------------

    def param(self, name: str, value) -> Tensor:
        """Register a named trainable leaf."""
        if name in self._params:
            raise ValueError(f"duplicate parameter name {name!r}")
        t = self._tensor(_as_matrix(value, f"param {name!r}"))
        self._params[name] = t
        return t

    def const(self, value) -> Tensor:
        """Register a non-trainable leaf."""
        return self._tensor(_as_matrix(value, "const"))

    def _tensor(self, value: np.ndarray) -> Tensor:
        if not self.record:
            return Tensor(value, self, _UNRECORDED)
        t = Tensor(value, self, self._count)
        self._count += 1
        return t

    def _push(self, op: str, out: Tensor, ins: tuple, aux=None):
        if self.record:
            self._nodes.append((op, out, ins, aux))

    def _own(self, *tensors: Tensor):
        for t in tensors:
            if t.tape is not self:
                raise ValueError("operand belongs to a different tape")

    # -- operations -----------------------------------------------------

    def matmul(self, a: Tensor, b: Tensor) -> Tensor:
        self._own(a, b)
        if a.cols != b.rows:
            raise ShapeError("matmul", a.shape, b.shape)
        out = self._tensor(K.matmul(a.value, b.value))
        self._push("matmul", out, (a, b))
        return out

    def hadamard(self, a: Tensor, b: Tensor) -> Tensor:
        self._own(a, b)
        if a.shape != b.shape:
            raise ShapeError("hadamard", a.shape, b.shape)
        out = self._tensor(K.hadamard(a.value, b.value))
        self._push("hadamard", out, (a, b))
        return out

    def add(self, a: Tensor, b: Tensor) -> Tensor:
        self._own(a, b)
        if a.shape != b.shape:
            raise ShapeError("add", a.shape, b.shape)
        out = self._tensor(K.add(a.value, b.value))
        self._push("add", out, (a, b))
        return out

    def scale(self, a: Tensor, s: float) -> Tensor:
        self._own(a)
        out = self._tensor(K.scale(a.value, float(s)))
        self._push("scale", out, (a,), float(s))
        return out

    def transpose(self, a: Tensor) -> Tensor:
        self._own(a)
        out = self._tensor(K.transpose(a.value))
        self._push("transpose", out, (a,))
        return out

    def affine_combine(self, a: Tensor, b: Tensor, lam: float) -> Tensor:
        """lam * a + (1 - lam) * b, entrywise."""
        self._own(a, b)
        if a.shape != b.shape:
            raise ShapeError("affine-combine", a.shape, b.shape)
        lam = float(lam)
        out = self._tensor(K.affine_combine(a.value, b.value, lam))
        self._push("affine-combine", out, (a, b), lam)
        return out

    def relu(self, a: Tensor) -> Tensor:
        self._own(a)
        out = self._tensor(K.relu(a.value))
        self._push("relu", out, (a,))
        return out

    def log_softmax(self, a: Tensor) -> Tensor:
        self._own(a)
        out = self._tensor(K.log_softmax(a.value))
        self._push("log-softmax", out, (a,))
        return out

    def row_mean(self, a: Tensor) -> Tensor:
        self._own(a)
        out = self._tensor(K.row_mean(a.value))
        self._push("row-mean", out, (a,))
        return out

    def sum(self, a: Tensor) -> Tensor:
        self._own(a)
        out = self._tensor(K.total_sum(a.value))
        self._push("sum", out, (a,))
        return out

    # -- reverse pass ---------------------------------------------------

    def backward(self, loss: Tensor) -> dict[str, np.ndarray]:
        """Gradients of a scalar loss for every trainable leaf.

        Parameters the loss does not depend on get exact zero gradients.
        """
        self._own(loss)
        if loss.shape != (1, 1):
            raise ValueError(f"backward: loss must be 1x1, got shape {loss.shape}")
        if not self._nodes:
            raise ValueError("backward: tape is empty (nothing was recorded)")
        grads: list[np.ndarray | None] = [None] * self._count
        grads[loss.index] = np.ones((1, 1))

        for op, out, ins, aux in reversed(self._nodes):
            g = grads[out.index]
            if g is None:
                continue
            if op == "matmul":
                a, b = ins
                self._acc(grads, a, K.matmul_nt(g, b.value))
                self._acc(grads, b, K.matmul_tn(a.value, g))
            elif op == "hadamard":
                a, b = ins
                self._acc(grads, a, K.hadamard(g, b.value))
                self._acc(grads, b, K.hadamard(g, a.value))
            elif op == "add":
                a, b = ins
                self._acc(grads, a, g)
                self._acc(grads, b, g)
            elif op == "scale":
                self._acc(grads, ins[0], K.scale(g, aux))
            elif op == "transpose":
                self._acc(grads, ins[0], K.transpose(g))
            elif op == "affine-combine":
                a, b = ins
                self._acc(grads, a, K.scale(g, aux))
                self._acc(grads, b, K.scale(g, 1.0 - aux))
            elif op == "relu":
                self._acc(grads, ins[0], K.relu_vjp(ins[0].value, g))
            elif op == "log-softmax":
                self._acc(grads, ins[0], K.log_softmax_vjp(out.value, g))
            elif op == "row-mean":
                self._acc(grads, ins[0], K.row_mean_vjp(g, ins[0].rows))
            elif op == "sum":
                a = ins[0]
                self._acc(grads, a, K.full(a.rows, a.cols, g[0, 0]))
            else:  # pragma: no cover - the op set above is closed
                raise RuntimeError(f"unknown op {op!r} on tape")

        result = {}
        for name, p in self._params.items():
            g = grads[p.index]
            result[name] = np.zeros_like(p.value) if g is None else g
        return result

    @staticmethod
    def _acc(grads, t: Tensor, g: np.ndarray):
        i = t.index
        grads[i] = g if grads[i] is None else K.add(grads[i], g)
