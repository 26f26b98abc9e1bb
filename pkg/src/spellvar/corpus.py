"""Data model and IO for slang dictionary corpora.

A corpus is an ordered collection of dictionary entries.  Each entry pairs a
headword (usually the informal spelling) with a tokenized definition.  Raw
definition text is kept alongside the tokens because the rule-based extractor
matches untokenized text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

#: Placeholder for annotation fields that no annotator has filled in.
SENTINEL = "_"

METHODS = ("baseline", "bootstrap", "crf")


class CorpusFormatError(ValueError):
    """Malformed corpus, annotation, or word-list input."""


@dataclass(frozen=True)
class Token:
    """One definition token plus its (possibly sentinel) annotations.

    Attributes:
        surface: the token exactly as written.
        lower: case-folded surface, used for all case-insensitive matching.
        lemma: lemma, or ``_`` when unannotated.
        upos: coarse part-of-speech tag, or ``_``.
        xpos: fine-grained tag, or ``_``.
        dep: dependency relation to the head, or ``_``.
        head: 0-based index of the head token inside the same definition;
            the token's own index marks the root (and unparsed tokens).
        is_title: whether the surface is titlecased.
        is_digit: whether the surface is all digits.
    """

    surface: str
    lower: str
    lemma: str
    upos: str
    xpos: str
    dep: str
    head: int
    is_title: bool
    is_digit: bool

    @classmethod
    def from_surface(cls, surface: str, head: int) -> "Token":
        return cls(
            surface=surface,
            lower=surface.casefold(),
            lemma=SENTINEL,
            upos=SENTINEL,
            xpos=SENTINEL,
            dep=SENTINEL,
            head=head,
            is_title=surface.istitle(),
            is_digit=surface.isdigit(),
        )


@dataclass(frozen=True)
class DictEntry:
    """A single dictionary entry.

    ``definition`` holds the tokenized definition; ``definition_text`` the raw
    string it was produced from.  ``example``, ``author`` and the vote counts
    are optional metadata carried through from the source file.
    """

    headword: str
    definition: tuple[Token, ...]
    definition_text: str
    entry_id: str
    example: str | None = None
    author: str | None = None
    upvotes: int | None = None
    downvotes: int | None = None

    def __post_init__(self) -> None:
        if not self.headword.strip():
            raise CorpusFormatError(f"entry {self.entry_id!r}: empty headword")
        for name in ("upvotes", "downvotes"):
            value = getattr(self, name)
            if value is not None and (not isinstance(value, int) or value < 0):
                raise CorpusFormatError(
                    f"entry {self.entry_id!r}: {name} must be a non-negative integer"
                )
        n = len(self.definition)
        for i, tok in enumerate(self.definition):
            if not 0 <= tok.head < n:
                raise CorpusFormatError(
                    f"entry {self.entry_id!r}: token {i} head index {tok.head} out of range"
                )


@dataclass(frozen=True)
class Corpus:
    """An immutable, ordered collection of entries."""

    entries: tuple[DictEntry, ...]
    annotated: bool = False

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for entry in self.entries:
            if entry.entry_id in seen:
                raise CorpusFormatError(f"duplicate entry_id {entry.entry_id!r}")
            seen.add(entry.entry_id)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[DictEntry]:
        return iter(self.entries)


@dataclass(frozen=True)
class VariantPair:
    """An extracted (informal, formal) spelling pair with provenance.

    ``iteration`` is the bootstrap/self-training round that produced the pair
    (0 for the rule baseline); ``rule_id`` is set only by the rule baseline.
    """

    informal: str
    formal: str
    score: float
    method: str
    iteration: int = 0
    source_entry: str = ""
    rule_id: str = ""

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.informal.casefold() == self.formal.casefold():
            raise ValueError(f"identity pair {self.informal!r}")
        if self.method == "baseline" and self.score != 1.0:
            raise ValueError("baseline pairs carry score 1.0")
        if self.method == "bootstrap" and self.score < 0.0:
            raise ValueError("bootstrap scores are non-negative")
        if self.method == "crf" and not 0.0 <= self.score <= 1.0:
            raise ValueError("crf scores are marginal probabilities in [0, 1]")


def tokenize(text: str) -> tuple[Token, ...]:
    """Split ``text`` on whitespace, peeling punctuation off chunk edges.

    Leading and trailing non-alphanumeric characters (straight quotes
    included) become tokens of their own; interior characters are never
    touched, so contractions and in-word digits survive intact.
    """
    surfaces: list[str] = []
    for chunk in text.split():
        left: list[str] = []
        right: list[str] = []
        while chunk and not chunk[0].isalnum():
            left.append(chunk[0])
            chunk = chunk[1:]
        while chunk and not chunk[-1].isalnum():
            right.append(chunk[-1])
            chunk = chunk[:-1]
        surfaces.extend(left)
        if chunk:
            surfaces.append(chunk)
        surfaces.extend(reversed(right))
    return tuple(Token.from_surface(s, head=i) for i, s in enumerate(surfaces))


def load_jsonl(path: str | Path) -> Corpus:
    """Load a JSON-lines corpus file.

    Every line is one object with required ``word`` and ``definition`` keys
    and optional ``example``, ``author``, ``upvotes``, ``downvotes`` and
    ``entry_id``.  Missing ids are synthesized as ``e<line number>``.
    """
    entries: list[DictEntry] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"line {line_no}: invalid JSON: {exc}") from exc
            if not isinstance(record, dict):
                raise CorpusFormatError(f"line {line_no}: record is not an object")
            for field in ("word", "definition"):
                if field not in record:
                    raise CorpusFormatError(f"line {line_no}: missing field {field!r}")
            text = record["definition"]
            if not isinstance(record["word"], str) or not isinstance(text, str):
                raise CorpusFormatError(f"line {line_no}: 'word' and 'definition' must be strings")
            try:
                entries.append(
                    DictEntry(
                        headword=record["word"],
                        definition=tokenize(text),
                        definition_text=text,
                        entry_id=str(record.get("entry_id") or f"e{line_no}"),
                        example=record.get("example"),
                        author=record.get("author"),
                        upvotes=record.get("upvotes"),
                        downvotes=record.get("downvotes"),
                    )
                )
            except CorpusFormatError as exc:
                raise CorpusFormatError(f"line {line_no}: {exc}") from exc
    try:
        return Corpus(entries=tuple(entries), annotated=False)
    except CorpusFormatError as exc:
        raise CorpusFormatError(f"{path}: {exc}") from exc


# Closed-class lexicon for the dependency-free fallback annotator.  Coverage
# is deliberately small: anything unknown falls through to suffix rules.
_CLOSED_CLASS = {
    "the": "DET", "a": "DET", "an": "DET", "this": "DET", "that": "DET",
    "these": "DET", "those": "DET", "some": "DET", "any": "DET", "each": "DET",
    "every": "DET", "no": "DET", "another": "DET",
    "of": "ADP", "in": "ADP", "on": "ADP", "at": "ADP", "by": "ADP",
    "for": "ADP", "with": "ADP", "from": "ADP", "about": "ADP", "as": "ADP",
    "i": "PRON", "you": "PRON", "he": "PRON", "she": "PRON", "it": "PRON",
    "we": "PRON", "they": "PRON", "your": "PRON", "my": "PRON", "his": "PRON",
    "her": "PRON", "its": "PRON", "their": "PRON", "someone": "PRON",
    "something": "PRON", "anyone": "PRON", "anything": "PRON", "who": "PRON",
    "what": "PRON",
    "and": "CCONJ", "or": "CCONJ", "but": "CCONJ",
    "if": "SCONJ", "because": "SCONJ", "when": "SCONJ", "while": "SCONJ",
    "to": "PART", "not": "PART",
    "is": "AUX", "are": "AUX", "was": "AUX", "were": "AUX", "be": "AUX",
    "been": "AUX", "am": "AUX", "do": "AUX", "does": "AUX", "did": "AUX",
    "have": "AUX", "has": "AUX", "had": "AUX", "will": "AUX", "would": "AUX",
    "can": "AUX", "could": "AUX", "should": "AUX", "may": "AUX", "must": "AUX",
    "very": "ADV", "really": "ADV", "also": "ADV", "just": "ADV", "too": "ADV",
    "so": "ADV", "then": "ADV", "there": "ADV", "here": "ADV",
    "yes": "INTJ", "oh": "INTJ", "hey": "INTJ",
}

_SUFFIX_UPOS = (
    ("ing", "VERB"), ("ed", "VERB"), ("ize", "VERB"), ("ise", "VERB"),
    ("ly", "ADV"),
    ("tion", "NOUN"), ("ness", "NOUN"), ("ment", "NOUN"), ("ity", "NOUN"),
    ("ous", "ADJ"), ("ive", "ADJ"), ("ful", "ADJ"), ("less", "ADJ"),
    ("ish", "ADJ"), ("able", "ADJ"),
)


def _guess_upos(token: Token) -> str:
    if token.is_digit:
        return "NUM"
    if not any(c.isalnum() for c in token.surface):
        return "PUNCT"
    if token.lower in _CLOSED_CLASS:
        return _CLOSED_CLASS[token.lower]
    for suffix, upos in _SUFFIX_UPOS:
        if len(token.lower) > len(suffix) + 1 and token.lower.endswith(suffix):
            return upos
    if token.is_title:
        return "PROPN"
    return "NOUN"


def fallback_annotator(entry: DictEntry) -> list[Token]:
    """Dependency-free annotator: identity lemma plus heuristic coarse POS.

    Fine-grained tags and dependency fields stay sentinel and every head
    points at the token itself.  Deterministic, hence idempotent.
    """
    return [
        replace(tok, lemma=tok.lower, upos=_guess_upos(tok), xpos=SENTINEL,
                dep=SENTINEL, head=i)
        for i, tok in enumerate(entry.definition)
    ]


def annotate(
    corpus: Corpus,
    annotator: Callable[[DictEntry], Sequence[Token]] | None = None,
) -> Corpus:
    """Return a new corpus with ``annotator`` applied to every entry.

    The annotator must keep token count and surfaces unchanged; violations
    and annotator exceptions are reported with the offending entry id.
    """
    annotator = annotator or fallback_annotator
    new_entries: list[DictEntry] = []
    for entry in corpus:
        try:
            tokens = tuple(annotator(entry))
        except CorpusFormatError:
            raise
        except Exception as exc:
            raise CorpusFormatError(f"entry {entry.entry_id!r}: annotator failed: {exc}") from exc
        if len(tokens) != len(entry.definition):
            raise CorpusFormatError(
                f"entry {entry.entry_id!r}: annotator changed token count "
                f"({len(entry.definition)} -> {len(tokens)})"
            )
        for i, (old, new) in enumerate(zip(entry.definition, tokens)):
            if old.surface != new.surface:
                raise CorpusFormatError(
                    f"entry {entry.entry_id!r}: annotator changed surface at {i} "
                    f"({old.surface!r} -> {new.surface!r})"
                )
        new_entries.append(replace(entry, definition=tokens))
    annotated = all(
        tok.upos != SENTINEL and tok.lemma != SENTINEL
        for entry in new_entries
        for tok in entry.definition
    )
    return Corpus(entries=tuple(new_entries), annotated=annotated)


def _parse_conllu_blocks(path: str | Path) -> list[list[list[str]]]:
    blocks: list[list[list[str]]] = []
    current: list[list[str]] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                if current:
                    blocks.append(current)
                    current = []
                continue
            if line.startswith("#"):
                continue
            columns = line.split("\t")
            if len(columns) != 10:
                raise CorpusFormatError(
                    f"{path}: line {line_no}: expected 10 tab-separated columns, got {len(columns)}"
                )
            current.append(columns)
    if current:
        blocks.append(current)
    return blocks


def merge_conllu(corpus: Corpus, annotations_path: str | Path) -> Corpus:
    """Merge pre-parsed annotations into ``corpus`` by position.

    The file holds one block per corpus entry, in order, with the usual
    10-column rows.  Head indices are 1-based in the file with 0 for the
    root; internally the root points at itself.
    """
    blocks = _parse_conllu_blocks(annotations_path)
    if len(blocks) != len(corpus):
        raise CorpusFormatError(
            f"{annotations_path}: {len(blocks)} annotation blocks for {len(corpus)} entries"
        )
    blocks_by_id = {entry.entry_id: block for entry, block in zip(corpus, blocks)}

    def _merge(entry: DictEntry) -> list[Token]:
        rows = blocks_by_id[entry.entry_id]
        if len(rows) != len(entry.definition):
            raise CorpusFormatError(
                f"entry {entry.entry_id!r}: {len(rows)} annotation rows for "
                f"{len(entry.definition)} tokens"
            )
        merged: list[Token] = []
        n = len(rows)
        for i, (tok, row) in enumerate(zip(entry.definition, rows)):
            _, surface, lemma, upos, xpos, _, head_str, dep = row[:8]
            if surface != tok.surface:
                raise CorpusFormatError(
                    f"entry {entry.entry_id!r}: surface mismatch at token {i}: "
                    f"{tok.surface!r} vs {surface!r}"
                )
            try:
                head_file = int(head_str)
            except ValueError as exc:
                raise CorpusFormatError(
                    f"entry {entry.entry_id!r}: non-integer head {head_str!r} at token {i}"
                ) from exc
            if not 0 <= head_file <= n:
                raise CorpusFormatError(
                    f"entry {entry.entry_id!r}: head index {head_file} out of range at token {i}"
                )
            head = i if head_file == 0 else head_file - 1
            merged.append(replace(tok, lemma=lemma, upos=upos, xpos=xpos, dep=dep, head=head))
        return merged

    return annotate(corpus, _merge)


def load_conllu(corpus_path: str | Path, annotations_path: str | Path) -> Corpus:
    """Load a JSONL corpus and merge positional annotations in one step."""
    return merge_conllu(load_jsonl(corpus_path), annotations_path)


def write_conllu(corpus: Corpus, path: str | Path) -> None:
    """Write one 10-column block per entry, blank-line separated."""
    with open(path, "w", encoding="utf-8") as handle:
        for entry in corpus:
            for i, tok in enumerate(entry.definition):
                head = 0 if tok.head == i else tok.head + 1
                handle.write("\t".join([
                    str(i + 1), tok.surface, tok.lemma, tok.upos, tok.xpos,
                    SENTINEL, str(head), tok.dep, SENTINEL, SENTINEL,
                ]) + "\n")
            handle.write("\n")


def write_jsonl(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for entry in corpus:
            record: dict[str, object] = {
                "word": entry.headword,
                "definition": entry.definition_text,
                "entry_id": entry.entry_id,
            }
            for field in ("example", "author", "upvotes", "downvotes"):
                value = getattr(entry, field)
                if value is not None:
                    record[field] = value
            handle.write(json.dumps(record) + "\n")


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read one word per line; ``#`` comments and blank lines are skipped."""
    words: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            words.add(line.casefold())
    return frozenset(words)


def read_seed_pairs(path: str | Path) -> list[tuple[str, str]]:
    """Read tab-separated (informal, formal) rows, case-folded."""
    seeds: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise CorpusFormatError(f"{path}: line {line_no}: expected two tab-separated fields")
            seeds.append((parts[0].strip().casefold(), parts[1].strip().casefold()))
    return seeds


_PAIRS_HEADER = ("informal", "formal", "score", "method", "origin", "entry_id")


def write_pairs_tsv(pairs: Iterable[VariantPair], path: str | Path) -> None:
    """Write pairs as TSV; the ``origin`` column holds the baseline rule id
    or the bootstrap/self-training iteration."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\t".join(_PAIRS_HEADER) + "\n")
        for pair in pairs:
            origin = pair.rule_id if pair.method == "baseline" else str(pair.iteration)
            handle.write("\t".join([
                pair.informal, pair.formal, repr(pair.score), pair.method,
                origin, pair.source_entry,
            ]) + "\n")


def read_pairs_tsv(path: str | Path) -> list[VariantPair]:
    pairs: list[VariantPair] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if line_no == 1 and parts[0] == _PAIRS_HEADER[0]:
                continue
            if len(parts) < 2:
                raise CorpusFormatError(f"{path}: line {line_no}: expected tab-separated pair row")
            informal, formal = parts[0], parts[1]
            score = float(parts[2]) if len(parts) > 2 else 1.0
            method = parts[3] if len(parts) > 3 else "baseline"
            origin = parts[4] if len(parts) > 4 else ""
            source = parts[5] if len(parts) > 5 else ""
            try:
                pairs.append(VariantPair(
                    informal=informal,
                    formal=formal,
                    score=score,
                    method=method,
                    iteration=int(origin) if origin.isdigit() else 0,
                    source_entry=source,
                    rule_id=origin if method == "baseline" else "",
                ))
            except ValueError as exc:
                raise CorpusFormatError(f"{path}: line {line_no}: {exc}") from exc
    return pairs
