"""Resource budgets shared by the library and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace
from pathlib import Path


class BudgetError(RuntimeError):
    """A configured resource bound would be exceeded.

    Raised instead of returning a possibly wrong or truncated answer.
    """


@dataclass(frozen=True)
class RunConfig:
    max_iterate_degree: int = 4096
    max_coeff_bits: int = 1_000_000
    refine_depth: int = 64
    scan_K: int | None = None
    threads: int = 1
    output_format: str = "json"
    # exact Sturm fallback above this degree is refused (see realroots)
    max_sturm_degree: int = 400

    def __post_init__(self):
        for name in ("max_iterate_degree", "max_coeff_bits", "refine_depth", "threads", "max_sturm_degree"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.scan_K is not None and self.scan_K <= 0:
            raise ValueError("scan_K must be positive")
        if self.output_format not in ("json", "csv"):
            raise ValueError("output_format must be json or csv")

    def scan_depth(self, d: int) -> int:
        """Largest k with d**k <= max_iterate_degree, capped by ``scan_K``."""
        if d < 2:
            k = 1
        else:
            k = max(1, int(math.floor(math.log(self.max_iterate_degree) / math.log(d) + 1e-12)))
            while d ** (k + 1) <= self.max_iterate_degree:
                k += 1
            while k > 1 and d**k > self.max_iterate_degree:
                k -= 1
        return min(k, self.scan_K) if self.scan_K else k

    def check_degree(self, degree: int) -> None:
        if degree > self.max_iterate_degree:
            raise BudgetError(f"iterate degree {degree} exceeds max_iterate_degree={self.max_iterate_degree}")

    def check_bits(self, bits: int) -> None:
        if bits > self.max_coeff_bits:
            raise BudgetError(f"coefficient size {bits} bits exceeds max_coeff_bits={self.max_coeff_bits}")

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "RunConfig":
        """Read ``key=value`` lines; ``#`` starts a comment."""
        known = {f.name: f for f in fields(cls)}
        values: dict = {}
        for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in known:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val if key == "output_format" else int(val.replace("_", ""))
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def with_(self, **changes) -> "RunConfig":
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT_CONFIG = RunConfig()
