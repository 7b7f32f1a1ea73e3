"""Text formats for lattices, automorphism lists, frames and nets.

Every writer emits an optional header line::

    # modlat <kind> sha256=<hex> [key=value ...]

where the hash covers the body (everything after the header).  Readers
verify the hash when the header is present and ignore other ``#`` lines.

Lattice body::

    elements N
    cover i j          (one line per Hasse edge, sorted)
    atoms i1 ... in    (optional)

Automorphism body: one map per line, image ids separated by spaces.
"""
from __future__ import annotations

import hashlib

import numpy as np

from .errors import ParseError
from .lattice import FiniteLattice, build_lattice
from .nets import NetCollection


def body_hash(body: str) -> str:
    return hashlib.sha256(body.encode()).hexdigest()


def with_header(kind: str, body: str, **meta) -> str:
    extra = "".join(f" {k}={v}" for k, v in meta.items())
    return f"# modlat {kind} sha256={body_hash(body)}{extra}\n{body}"


def split_header(text: str, kind: str | None = None) -> tuple[dict, str]:
    """Return ``(meta, body)``; checks the kind and body hash when a header exists."""
    if not text.startswith("# modlat "):
        return {}, text
    first, _, body = text.partition("\n")
    fields = first.split()[2:]
    if not fields:
        raise ParseError("header without a kind")
    meta = {"kind": fields[0]}
    for f in fields[1:]:
        k, sep, v = f.partition("=")
        if not sep:
            raise ParseError(f"bad header field {f!r}")
        meta[k] = v
    if kind is not None and meta["kind"] != kind:
        raise ParseError(f"expected a {kind} file, found {meta['kind']}")
    if "sha256" in meta and meta["sha256"] != body_hash(body):
        raise ParseError(f"{meta['kind']} body does not match its header hash")
    return meta, body


def _ints(tokens, where):
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(f"non-integer token in {where}") from exc


def dumps_lattice(lat: FiniteLattice, atoms=None) -> str:
    lines = [f"elements {lat.size}"]
    lines += [f"cover {a} {b}" for a, b in sorted(lat.covers)]
    if atoms is not None:
        lines.append("atoms " + " ".join(str(int(a)) for a in atoms))
    return "\n".join(lines) + "\n"


def parse_lattice(text: str) -> tuple[FiniteLattice, tuple[int, ...] | None]:
    """Parse a lattice file into the lattice and optional atom ids."""
    _, body = split_header(text, "lattice")
    n = None
    covers, atoms = [], None
    for lineno, raw in enumerate(body.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, *rest = line.split()
        where = f"line {lineno}"
        if head == "elements":
            if n is not None or len(rest) != 1:
                raise ParseError(f"{where}: expected a single 'elements N' line")
            n = _ints(rest, where)[0]
        elif head == "cover":
            if len(rest) != 2:
                raise ParseError(f"{where}: cover needs two ids")
            covers.append(tuple(_ints(rest, where)))
        elif head == "atoms":
            if atoms is not None:
                raise ParseError(f"{where}: repeated atoms line")
            atoms = tuple(_ints(rest, where))
        else:
            raise ParseError(f"{where}: unknown directive {head!r}")
    if n is None:
        raise ParseError("missing 'elements N' line")
    for a in atoms or ():
        if not 0 <= a < n:
            raise ParseError(f"atom {a} out of range")
    return build_lattice(covers, n=n), atoms


def dumps_lattice_file(lat: FiniteLattice, atoms=None, **meta) -> str:
    return with_header("lattice", dumps_lattice(lat, atoms), **meta)


def dumps_automorphisms(perms: np.ndarray) -> str:
    perms = np.atleast_2d(np.asarray(perms))
    return "".join(" ".join(map(str, row.tolist())) + "\n" for row in perms)


def parse_automorphisms(text: str, size: int | None = None) -> np.ndarray:
    meta, body = split_header(text)
    lines = [l for l in body.splitlines() if l.strip() and not l.startswith("#")]
    if not lines:
        return np.empty((0, size or 0), dtype=np.int64)
    width = len(lines[0].split())
    if size is not None and width != size:
        raise ParseError(f"maps have {width} entries, expected {size}")
    flat = np.array(" ".join(lines).split(), dtype=np.int64)
    if flat.size != width * len(lines):
        raise ParseError("automorphism lines have unequal lengths")
    return flat.reshape(len(lines), width)


def dumps_group_file(perms: np.ndarray, **meta) -> str:
    return with_header("group", dumps_automorphisms(perms), **meta)


def dumps_frame_file(atoms, **meta) -> str:
    return with_header("frame", "atoms " + " ".join(str(int(a)) for a in atoms) + "\n", **meta)


def parse_frame(text: str) -> tuple[dict, tuple[int, ...]]:
    meta, body = split_header(text, "frame")
    for line in body.splitlines():
        head, *rest = line.split() or [""]
        if head == "atoms":
            return meta, tuple(_ints(rest, "atoms line"))
    raise ParseError("frame file has no atoms line")


def dumps_net(tau: NetCollection) -> str:
    return tau.dumps()


def parse_net(text: str) -> NetCollection:
    try:
        return NetCollection.loads(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
