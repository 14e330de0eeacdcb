"""Size caps guarding every enumeration in the pipeline."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

from .errors import CapExceeded, VcspError


@dataclass(frozen=True)
class Caps:
    domain_size: int = 4
    arity: int = 4
    bruteforce_states: int = 2_000_000
    closure_vertices: int = 20_000
    # gadget extraction enumerates all binary operations on D (|D|^(|D|^2))
    binary_ops: int = 4096

    def __post_init__(self):
        for name in ("domain_size", "arity", "bruteforce_states", "closure_vertices", "binary_ops"):
            if getattr(self, name) < 1:
                raise VcspError(f"cap {name} must be positive")

    def check_domain(self, size: int):
        if size > self.domain_size:
            raise CapExceeded(f"domain size {size} exceeds cap {self.domain_size}")

    def check_arity(self, arity: int):
        if arity > self.arity:
            raise CapExceeded(f"arity {arity} exceeds cap {self.arity}")

    def check_states(self, count: int, what: str = "state space"):
        if count > self.bruteforce_states:
            raise CapExceeded(f"{what} of size {count} exceeds cap {self.bruteforce_states}")


DESK = Caps()
STRICT = Caps(domain_size=3, arity=3, bruteforce_states=100_000, closure_vertices=2_000, binary_ops=512)

_PROFILES = {"desk": DESK, "strict": STRICT}


def caps_from_env(default: Caps = DESK) -> Caps:
    profile = os.environ.get("VCSPLAB_CAPS_PROFILE")
    if profile is None:
        return default
    try:
        return _PROFILES[profile]
    except KeyError:
        raise VcspError(f"unknown caps profile {profile!r}; expected one of {sorted(_PROFILES)}")


def override(caps: Caps, **kwargs) -> Caps:
    kwargs = {k: v for k, v in kwargs.items() if v is not None}
    return replace(caps, **kwargs) if kwargs else caps
