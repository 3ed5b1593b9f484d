"""On-disk cache for built sequences and prime tables.

Entries are .npz files named by a sha256 of the structured key. Writes go to a
temporary file in the same directory and are renamed into place.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import warnings
from pathlib import Path

import numpy as np

from ..primes import PrimeTable
from ..sequences import SieveParams, WeightedSequence, build_sequence

FORMAT_VERSION = 1


def cache_root(cache_dir=None) -> Path | None:
    d = cache_dir if cache_dir is not None else os.environ.get("ANTLAB_CACHE")
    if not d:
        return None
    p = Path(d)
    p.mkdir(parents=True, exist_ok=True)
    return p


def cache_key(kind: str, x, X=None, eta=None) -> str:
    blob = json.dumps([FORMAT_VERSION, kind, repr(x), repr(X), repr(eta)])
    return hashlib.sha256(blob.encode()).hexdigest()


def _key_of(obj_or_key):
    if isinstance(obj_or_key, tuple):
        return cache_key(*obj_or_key)
    return obj_or_key


def cache_lookup(key, cache_dir=None):
    """The cached WeightedSequence or PrimeTable for ``key``, or None.

    ``key`` is either a digest from :func:`cache_key` or the tuple
    (kind, x, X, eta). Unreadable entries are deleted with a warning.
    """
    root = cache_root(cache_dir)
    if root is None:
        return None
    path = root / f"{_key_of(key)}.npz"
    if not path.exists():
        return None
    try:
        with np.load(path, allow_pickle=False) as z:
            kind = str(z["kind"])
            if kind == "primes":
                return PrimeTable(int(z["limit"]), z["primes"].copy())
            p = z["params"]
            params = SieveParams(int(p[0]), float(p[1]), float(p[2]), float(p[3]), float(p[4]), float(p[5]), int(p[6]))
            return WeightedSequence(z["n"].copy(), z["w"].copy(), params, kind)
    except Exception as exc:  # noqa: BLE001 - any failure means the entry is unusable
        warnings.warn(f"discarding corrupt cache entry {path.name}: {exc}", RuntimeWarning, stacklevel=2)
        try:
            path.unlink()
        except OSError:
            pass
        return None


def cache_store(key, obj, cache_dir=None) -> Path | None:
    root = cache_root(cache_dir)
    if root is None:
        return None
    path = root / f"{_key_of(key)}.npz"
    if isinstance(obj, PrimeTable):
        arrays = {"kind": np.array("primes"), "limit": np.array(obj.limit), "primes": np.asarray(obj.primes)}
    else:
        p = obj.params
        if p.x >= 2**53:
            raise ValueError("x too large to cache exactly")
        arrays = {
            "kind": np.array(obj.kind),
            "n": obj.n,
            "w": obj.w,
            "params": np.array([p.x, p.X, p.eta, p.delta, p.varpi, p.Y, p.n0], dtype=np.float64),
        }
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            np.savez(fh, **arrays)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def cached_sequence(kind: str, params: SieveParams, cache_dir=None, threads=None) -> WeightedSequence:
    key = (kind, params.x, params.X, params.eta)
    seq = cache_lookup(key, cache_dir)
    if seq is not None and seq.params == params:
        return seq
    seq = build_sequence(kind, params, threads)
    cache_store(key, seq, cache_dir)
    return seq
