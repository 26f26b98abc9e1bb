"""Read and write labeled tagging data.

The file format is one ``surface<TAB>tag`` row per token with blank lines
between sequences; tags are I (part of a formal spelling) or O.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

from spellvar.corpus import CorpusFormatError

TAGS = ("I", "O")

LabeledBlock = tuple[tuple[str, ...], tuple[str, ...]]


def read_labeled_file(path: str | Path) -> list[LabeledBlock]:
    blocks: list[LabeledBlock] = []
    surfaces: list[str] = []
    tags: list[str] = []

    def flush() -> None:
        if surfaces:
            blocks.append((tuple(surfaces), tuple(tags)))
            surfaces.clear()
            tags.clear()

    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                flush()
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise CorpusFormatError(
                    f"{path}: line {line_no}: expected 'surface<TAB>tag'"
                )
            surface, tag = parts
            if tag not in TAGS:
                raise CorpusFormatError(
                    f"{path}: line {line_no}: tag must be one of {TAGS}, got {tag!r}"
                )
            surfaces.append(surface)
            tags.append(tag)
    flush()
    return blocks


def write_labeled_file(blocks: Iterable[Sequence[Sequence[str]]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for surfaces, tags in blocks:
            for surface, tag in zip(surfaces, tags):
                handle.write(f"{surface}\t{tag}\n")
            handle.write("\n")
