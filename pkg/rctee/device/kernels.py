"""Deterministic functions bound to IP kernel names."""

import struct
from typing import Callable, Dict, Sequence, Tuple

import numpy as np

from rctee.crypto import hash_data
from rctee.errors import ErrorCode, RcteeError

Kernel = Callable[[Sequence[bytes]], Tuple[bytes, ...]]

LENET_CLASSES = 10

_REGISTRY: Dict[str, Kernel] = {}


def register_kernel(name: str) -> Callable[[Kernel], Kernel]:
    def decorator(function: Kernel) -> Kernel:
        _REGISTRY[name] = function
        return function

    return decorator


def _fault(detail: str) -> RcteeError:
    return RcteeError(ErrorCode.KERNEL_FAULT, detail)


@register_kernel("echo")
def echo(inputs: Sequence[bytes]) -> Tuple[bytes, ...]:
    """Identity: one output per input."""
    return tuple(inputs)


@register_kernel("add32")
def add32(inputs: Sequence[bytes]) -> Tuple[bytes, ...]:
    """Sum of two 32-bit big-endian words, modulo 2**32."""
    if len(inputs) != 2 or any(len(word) != 4 for word in inputs):
        raise _fault("add32 takes two 4-byte inputs")
    a, b = (struct.unpack(">I", word)[0] for word in inputs)
    return (struct.pack(">I", (a + b) & 0xFFFFFFFF),)


@register_kernel("xor")
def xor(inputs: Sequence[bytes]) -> Tuple[bytes, ...]:
    if len(inputs) != 2 or len(inputs[0]) != len(inputs[1]):
        raise _fault("xor takes two inputs of equal length")
    a, b = (np.frombuffer(x, dtype=np.uint8) for x in inputs)
    return (np.bitwise_xor(a, b).tobytes(),)


@register_kernel("sha384")
def sha384(inputs: Sequence[bytes]) -> Tuple[bytes, ...]:
    return (hash_data(b"".join(inputs)),)


@register_kernel("lenet_stub")
def lenet_stub(inputs: Sequence[bytes]) -> Tuple[bytes, ...]:
    """Ten pseudo-logits derived from the hash of the input image."""
    if not inputs:
        raise _fault("lenet_stub needs an input image")
    return (hash_data(b"".join(inputs))[:LENET_CLASSES],)


def get_kernel(name: str) -> Kernel:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise _fault(f"no kernel named {name!r}") from None


def kernel_names() -> Tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def run_kernel(name: str, inputs: Sequence[bytes], n_outputs: int) -> Tuple[bytes, ...]:
    """
    Executes kernel ``name`` and checks that it produced ``n_outputs`` records.

    Raises
    ------
    RcteeError
        KERNEL_FAULT for an unknown kernel, bad inputs or a wrong output count.
    """
    outputs = get_kernel(name)(list(inputs))
    if len(outputs) != n_outputs:
        raise _fault(
            f"kernel {name} produced {len(outputs)} outputs, {n_outputs} requested"
        )
    return outputs
