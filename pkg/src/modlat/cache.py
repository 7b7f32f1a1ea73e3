"""On-disk cache of built models.

Layout: ``<root>/<key>/{lattice,frame,group}``, where ``key`` hashes the
canonical model spec.  The frame and group headers carry the hash of the
lattice body they belong to, so a stale or edited file is detected and the
model rebuilt.
"""
from __future__ import annotations

import hashlib
import os
import shutil
from dataclasses import dataclass
from pathlib import Path

from .autgroup import DEFAULT_BUDGET, AutGroup
from .errors import ModlatError, ParseError
from .frame import build_frame
from .instance import Instance
from .io import (body_hash, dumps_frame_file, dumps_group_file, dumps_lattice, parse_automorphisms,
                 parse_frame, parse_lattice, split_header, with_header)
from .models import FIXTURES, canonical_spec, load_model, parse_model_spec
from .rings import FiniteRing, build_ring

FORMAT_VERSION = "1"
FILES = ("lattice", "frame", "group")


@dataclass
class CachedAction:
    """What a cached model remembers about its matrix group."""
    ring: FiniteRing
    n: int
    gl_order: int
    kernel_order: int
    mode: str


def cache_root() -> Path:
    return Path(os.environ.get("MODLAT_CACHE", Path.home() / ".cache" / "modlat"))


def model_key(spec: str) -> str:
    return hashlib.sha256(f"{FORMAT_VERSION}:{canonical_spec(spec)}".encode()).hexdigest()[:16]


def save_instance(inst: Instance, spec: str, root: Path | None = None) -> Path:
    d = (root or cache_root()) / model_key(spec)
    d.mkdir(parents=True, exist_ok=True)
    lat_body = dumps_lattice(inst.lattice)
    lat_hash = body_hash(lat_body)
    A = inst.action
    meta = {"spec": canonical_spec(spec)}
    group_meta = dict(meta, lattice=lat_hash)
    if A is not None:
        group_meta.update(gl=A.gl_order, kernel=A.kernel_order, mode=A.mode)
    files = {
        "lattice": with_header("lattice", lat_body, **meta),
        "frame": dumps_frame_file(inst.atoms, lattice=lat_hash),
        "group": dumps_group_file(inst.G.perms, **group_meta),
    }
    for name, text in files.items():
        tmp = d / f".{name}.tmp"
        tmp.write_text(text)
        tmp.replace(d / name)
    return d


def _read(d: Path) -> Instance:
    lat_text = (d / "lattice").read_text()
    lat_meta, lat_body = split_header(lat_text, "lattice")
    lat, _ = parse_lattice(lat_text)
    lat_hash = body_hash(lat_body)
    frame_meta, atoms = parse_frame((d / "frame").read_text())
    group_meta, group_body = split_header((d / "group").read_text(), "group")
    if frame_meta.get("lattice") != lat_hash or group_meta.get("lattice") != lat_hash:
        raise ParseError("cached files belong to different lattices")
    perms = parse_automorphisms(group_body, size=lat.size)
    spec = lat_meta["spec"]
    action = None
    if "gl" in group_meta:
        n, ring = parse_model_spec(spec)
        action = CachedAction(build_ring(ring), n, int(group_meta["gl"]),
                              int(group_meta["kernel"]), group_meta["mode"])
    G = AutGroup(lat, perms, presorted=True)
    return Instance(spec, build_frame(lat, atoms), G, action=action)


def load_cached(spec: str, use_cache: bool = True, budget: int = DEFAULT_BUDGET,
                root: Path | None = None) -> Instance:
    """Load ``spec`` from the cache, building and storing it on a miss."""
    if spec in FIXTURES or not use_cache:
        return load_model(spec, budget=budget)
    d = (root or cache_root()) / model_key(spec)
    if all((d / f).exists() for f in FILES):
        try:
            inst = _read(d)
            inst.budget = budget
            return inst
        except (ModlatError, OSError, ValueError, KeyError):
            pass  # corrupt or stale entry: rebuild below
    inst = load_model(spec, budget=budget)
    save_instance(inst, spec, root)
    return inst


def list_cache(root: Path | None = None) -> list[dict]:
    root = root or cache_root()
    out = []
    if not root.exists():
        return out
    for d in sorted(p for p in root.iterdir() if p.is_dir()):
        spec = None
        lat = d / "lattice"
        if lat.exists():
            with lat.open() as fh:
                first = fh.readline()
            spec = next((f[5:] for f in first.split() if f.startswith("spec=")), None)
        size = sum(f.stat().st_size for f in d.iterdir() if f.is_file())
        out.append({"key": d.name, "spec": spec, "bytes": size,
                    "complete": all((d / f).exists() for f in FILES)})
    return out


def clear_cache(root: Path | None = None) -> int:
    """Remove every cached model; returns how many entries were removed."""
    entries = list_cache(root)
    root = root or cache_root()
    for e in entries:
        shutil.rmtree(root / e["key"])
    return len(entries)
