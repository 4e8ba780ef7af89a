"""Plain-text file formats (ASCII, LF, 0-based vertex ids).

Edge list::

    # optional comment lines
    n m
    u v
    ...

Decomposition::

    paths k
    v0 v1 v2 ...
    ...
"""

from __future__ import annotations

from pathlib import Path as FsPath
from typing import Iterable, TextIO

from .digraph import Digraph, Path


class FormatError(ValueError):
    pass


def _content_lines(text: str) -> list[tuple[int, str]]:
    out = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append((lineno, line))
    return out


def parse_edge_list(text: str, *, simple: bool = False) -> Digraph:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty edge list: missing 'n m' header")
    lineno, header = lines[0]
    try:
        n, m = (int(x) for x in header.split())
    except ValueError:
        raise FormatError(f"line {lineno}: expected 'n m' header, got {header!r}") from None
    if n < 0 or m < 0:
        raise FormatError(f"line {lineno}: negative size in header")
    body = lines[1:]
    if len(body) != m:
        raise FormatError(f"header announces {m} edges but file has {len(body)}")
    D = Digraph(n, simple=simple)
    for lineno, line in body:
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            D.add_edge(u, v)
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    return D


def format_edge_list(D: Digraph) -> str:
    lines = [f"{D.n} {D.m}"]
    lines.extend(f"{u} {v}" for u, v in D.edges())
    return "\n".join(lines) + "\n"


def read_edge_list(path, *, simple: bool = False) -> Digraph:
    return parse_edge_list(FsPath(path).read_text(encoding="ascii"), simple=simple)


def write_edge_list(D: Digraph, dest: str | FsPath | TextIO) -> None:
    _write(format_edge_list(D), dest)


def parse_paths(text: str) -> list[Path]:
    lines = _content_lines(text)
    if not lines:
        raise FormatError("empty decomposition file: missing 'paths k' header")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "paths" or not parts[1].isdigit():
        raise FormatError(f"line {lineno}: expected 'paths k', got {header!r}")
    k = int(parts[1])
    body = lines[1:]
    if len(body) != k:
        raise FormatError(f"header announces {k} paths but file has {len(body)}")
    paths = []
    for lineno, line in body:
        try:
            paths.append(tuple(int(x) for x in line.split()))
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer vertex in {line!r}") from None
    return paths


def format_paths(paths: Iterable[Path]) -> str:
    paths = list(paths)
    lines = [f"paths {len(paths)}"]
    lines.extend(" ".join(map(str, p)) for p in paths)
    return "\n".join(lines) + "\n"


def read_paths(path) -> list[Path]:
    return parse_paths(FsPath(path).read_text(encoding="ascii"))


def write_paths(paths: Iterable[Path], dest) -> None:
    _write(format_paths(paths), dest)


def _write(text: str, dest) -> None:
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
