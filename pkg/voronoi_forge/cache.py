#!/usr/bin/env python3
"""
On-disk cache of integer q-expansions.

One plain-text file per (name, weight, precision) with lines "n a(n)".
The directory comes from VF_CACHE_DIR; without it the cache is inert.
"""

import os
import threading
from pathlib import Path
from typing import List, Optional, Sequence

CACHE_ENV_VAR = "VF_CACHE_DIR"


class ExpansionCache:
    """Directory-backed store for exact integer coefficient vectors."""

    def __init__(self, directory: Optional[str] = None) -> None:
        self._directory: Optional[Path] = Path(directory) if directory else None
        self._initialized = False
        self._lock = threading.Lock()

    def initialize(self, directory: Optional[str] = None) -> None:
        """Bind the cache to a directory (or VF_CACHE_DIR) and create it."""
        if directory:
            self._directory = Path(directory)
        elif self._directory is None and os.getenv(CACHE_ENV_VAR):
            self._directory = Path(os.environ[CACHE_ENV_VAR])
        if self._directory is not None:
            self._directory.mkdir(parents=True, exist_ok=True)
        self._initialized = True

    def is_initialized(self) -> bool:
        return self._initialized

    @property
    def enabled(self) -> bool:
        return self._directory is not None

    def reset(self) -> None:
        """Forget the bound directory (useful for testing or reconfiguration)."""
        self._directory = None
        self._initialized = False

    def path_for(self, name: str, weight: int, precision: int) -> Optional[Path]:
        if self._directory is None:
            return None
        return self._directory / f"{name}_k{weight}_N{precision}.txt"

    def load(self, name: str, weight: int, precision: int) -> Optional[List[int]]:
        """Coefficients a(0..precision), or None when absent or unreadable."""
        if not self._initialized:
            self.initialize()
        path = self.path_for(name, weight, precision)
        if path is None or not path.exists():
            return None
        coeffs = [0] * (precision + 1)
        seen = 0
        try:
            with path.open("r", encoding="ascii") as handle:
                for line in handle:
                    if not line.strip():
                        continue
                    n_text, value_text = line.split()
                    n = int(n_text)
                    if not 0 <= n <= precision:
                        return None
                    coeffs[n] = int(value_text)
                    seen += 1
        except (OSError, ValueError):
            return None
        return coeffs if seen == precision + 1 else None

    def store(
        self, name: str, weight: int, precision: int, coeffs: Sequence[int]
    ) -> Optional[Path]:
        if not self._initialized:
            self.initialize()
        path = self.path_for(name, weight, precision)
        if path is None:
            return None
        if len(coeffs) != precision + 1:
            raise ValueError(
                f"Expected {precision + 1} coefficients for {name}, got {len(coeffs)}"
            )
        # readers never observe a partially written file
        tmp = path.with_suffix(f".{os.getpid()}.{threading.get_ident()}.tmp")
        with self._lock:
            with tmp.open("w", encoding="ascii") as handle:
                for n, value in enumerate(coeffs):
                    handle.write(f"{n} {int(value)}\n")
            os.replace(tmp, path)
        return path


# Global cache instance
expansion_cache = ExpansionCache()


def initialize_cache(directory: Optional[str] = None) -> None:
    """Initialize the global expansion cache."""
    expansion_cache.initialize(directory)


def get_expansion_cache() -> ExpansionCache:
    """Get the global expansion cache instance."""
    return expansion_cache
