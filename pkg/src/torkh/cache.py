"""On-disk JSON cache keyed by diagram hash, theory and ring.

Writers go through a temporary file and ``os.replace`` so concurrent
readers only ever see complete files.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .links import LinkDiagram, canonical_hash

ENV_VAR = "TORKH_CACHE"


class Cache:
    def __init__(self, root):
        self.root = Path(root)

    @classmethod
    def from_env(cls, override=None):
        """Cache at ``override`` or ``$TORKH_CACHE``; ``None`` when neither is set."""
        root = override or os.environ.get(ENV_VAR)
        return cls(root) if root else None

    def path(self, diag: LinkDiagram, theory: str, ring: str, kind="homology") -> Path:
        key = canonical_hash(diag).hex()
        return self.root / f"{key}.{theory}.{ring}.{kind}.json"

    def load(self, diag, theory, ring, kind="homology"):
        p = self.path(diag, theory, ring, kind)
        try:
            with open(p, encoding="utf-8") as fh:
                return json.load(fh)
        except FileNotFoundError:
            return None
        except json.JSONDecodeError:
            return None

    def store(self, diag, theory, ring, data, kind="homology"):
        p = self.path(diag, theory, ring, kind)
        p.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(data, fh, sort_keys=True, separators=(",", ":"))
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return p
