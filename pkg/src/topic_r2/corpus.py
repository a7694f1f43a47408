"""Sparse document-term matrices: construction, text ingestion and file I/O.

Triplet files hold one ``doc_id<TAB>term<TAB>count`` record per line. Because
zero counts are never written, the column order (and any all-zero columns) is
kept in an optional ``<path>.vocab`` sidecar listing one term per line.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from os import PathLike
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DataError

VOCAB_SUFFIX = ".vocab"

_TOKEN_RE = re.compile(r"[^\W_]+")


class DocumentTermMatrix:
    """Immutable D x V matrix of non-negative integer token counts.

    Args:
        counts: anything ``scipy.sparse.csr_matrix`` accepts, shape (D, V).
        doc_ids: D distinct document identifiers.
        vocabulary: V distinct, non-empty term strings.
    """

    def __init__(self, counts, doc_ids: Sequence[str], vocabulary: Sequence[str]):
        mat = sp.csr_matrix(counts)
        if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
            raise DataError(f"counts must be a non-empty 2-D matrix, got shape {mat.shape}")
        data = mat.data
        if data.size and not np.all(np.isfinite(data)):
            raise DataError("counts must be finite")
        if data.size and np.any(data != np.round(data)):
            raise DataError("counts must be integers")
        if data.size and data.min() < 0:
            raise DataError("negative count")
        if data.size and data.max() > np.iinfo(np.int32).max:
            raise DataError("count exceeds 32-bit range")
        mat = sp.csr_matrix(mat, dtype=np.int32)
        mat.eliminate_zeros()
        mat.sum_duplicates()
        mat.sort_indices()

        doc_ids = [str(x) for x in doc_ids]
        vocabulary = [str(x) for x in vocabulary]
        n_docs, n_terms = mat.shape
        if len(doc_ids) != n_docs:
            raise DataError(f"{len(doc_ids)} doc ids for {n_docs} rows")
        if len(vocabulary) != n_terms:
            raise DataError(f"{len(vocabulary)} vocabulary entries for {n_terms} columns")
        if len(set(doc_ids)) != n_docs:
            raise DataError("document ids must be unique")
        if len(set(vocabulary)) != n_terms:
            raise DataError("vocabulary entries must be unique")
        if any(not t for t in vocabulary):
            raise DataError("vocabulary entries must be non-empty")

        lengths = np.asarray(mat.sum(axis=1, dtype=np.int64)).ravel()
        empty = np.flatnonzero(lengths == 0)
        if empty.size:
            raise DataError(f"empty document {doc_ids[empty[0]]!r} (row {empty[0]})")

        for arr in (mat.data, mat.indices, mat.indptr, lengths):
            arr.flags.writeable = False
        self._counts = mat
        self._doc_ids = tuple(doc_ids)
        self._vocabulary = tuple(vocabulary)
        self._doc_lengths = lengths

    @property
    def counts(self) -> sp.csr_matrix:
        return self._counts

    @property
    def doc_ids(self) -> tuple[str, ...]:
        return self._doc_ids

    @property
    def vocabulary(self) -> tuple[str, ...]:
        return self._vocabulary

    @property
    def doc_lengths(self) -> np.ndarray:
        return self._doc_lengths

    @property
    def n_docs(self) -> int:
        return self._counts.shape[0]

    @property
    def n_terms(self) -> int:
        return self._counts.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._counts.shape

    @property
    def total_tokens(self) -> int:
        return int(self._doc_lengths.sum())

    def term_totals(self) -> np.ndarray:
        """Corpus-wide count of each term (int64)."""
        return np.asarray(self._counts.sum(axis=0, dtype=np.int64)).ravel()

    def dense(self) -> np.ndarray:
        return self._counts.toarray().astype(np.int64)

    def __eq__(self, other):
        if not isinstance(other, DocumentTermMatrix):
            return NotImplemented
        return (
            self.doc_ids == other.doc_ids
            and self.vocabulary == other.vocabulary
            and self.shape == other.shape
            and (self._counts != other._counts).nnz == 0
        )

    __hash__ = None

    def __repr__(self):
        return f"DocumentTermMatrix(D={self.n_docs}, V={self.n_terms}, nnz={self._counts.nnz})"


@dataclass(frozen=True)
class IngestOptions:
    stopwords: frozenset[str] = field(default_factory=frozenset)
    min_doc_frequency: int = 2
    lowercase: bool = True

    def __post_init__(self):
        if int(self.min_doc_frequency) < 1:
            raise ValueError("min_doc_frequency must be >= 1")
        object.__setattr__(self, "stopwords", frozenset(self.stopwords))


def tokenize(text: str, lowercase: bool = True) -> list[str]:
    """Split on maximal runs of non-alphanumeric characters."""
    if lowercase:
        text = text.lower()
    return _TOKEN_RE.findall(text)


def default_stopwords() -> frozenset[str]:
    """The bundled 175-word English stopword list."""
    text = resources.files("topic_r2").joinpath("data/stopwords_en.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def build_dtm(
    documents: Iterable[tuple[str, str]], options: IngestOptions | None = None
) -> tuple[DocumentTermMatrix, int]:
    """Tokenize raw documents into a DTM.

    Stopwords are removed, then terms found in fewer than
    ``options.min_doc_frequency`` documents are dropped. Documents left with
    no tokens are discarded.

    Returns:
        The DTM and the number of documents dropped for being empty.
    """
    options = options or IngestOptions()
    documents = list(documents)
    if not documents:
        raise DataError("no documents")

    # lowercase before stopword matching only when asked to
    stop = options.stopwords
    bags: list[Counter] = []
    ids: list[str] = []
    seen_ids: set[str] = set()
    for doc_id, text in documents:
        doc_id = str(doc_id)
        if doc_id in seen_ids:
            raise DataError(f"duplicate document id {doc_id!r}")
        seen_ids.add(doc_id)
        ids.append(doc_id)
        bags.append(Counter(t for t in tokenize(text, options.lowercase) if t not in stop))

    doc_freq: Counter = Counter()
    for bag in bags:
        doc_freq.update(bag.keys())
    keep = {t for t, df in doc_freq.items() if df >= options.min_doc_frequency}

    vocab_index: dict[str, int] = {}
    rows, cols, vals = [], [], []
    kept_ids: list[str] = []
    for doc_id, bag in zip(ids, bags):
        terms = [t for t in bag if t in keep]  # Counter keeps first-seen order
        if not terms:
            continue
        r = len(kept_ids)
        kept_ids.append(doc_id)
        for t in terms:
            c = vocab_index.setdefault(t, len(vocab_index))
            rows.append(r)
            cols.append(c)
            vals.append(bag[t])
    n_dropped = len(ids) - len(kept_ids)
    if not kept_ids:
        raise DataError("all documents empty after filtering")

    counts = sp.csr_matrix(
        (np.asarray(vals, dtype=np.int64), (rows, cols)),
        shape=(len(kept_ids), len(vocab_index)),
    )
    return DocumentTermMatrix(counts, kept_ids, list(vocab_index)), n_dropped


def mean_document(dtm: DocumentTermMatrix) -> np.ndarray:
    """Average count vector across documents (length V)."""
    return dtm.term_totals().astype(np.float64) / dtm.n_docs


def load_dtm(path: str | PathLike, vocabulary: Sequence[str] | None = None) -> DocumentTermMatrix:
    """Read a triplet file.

    Document order follows first appearance. Column order follows
    ``vocabulary`` when given, else the ``.vocab`` sidecar if one exists,
    else first appearance in the file.
    """
    path = Path(path)
    if vocabulary is None:
        side = Path(str(path) + VOCAB_SUFFIX)
        if side.exists():
            vocabulary = read_vocabulary(side)

    vocab_index: dict[str, int] = {}
    fixed_vocab = vocabulary is not None
    if fixed_vocab:
        for i, t in enumerate(vocabulary):
            if not t or t in vocab_index:
                raise DataError(f"invalid or duplicate vocabulary entry {t!r}", path)
            vocab_index[t] = i

    doc_index: dict[str, int] = {}
    seen: set[tuple[int, int]] = set()
    rows, cols, vals = [], [], []
    with open(path, encoding="utf-8", newline="\n") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataError(f"expected 3 tab-separated fields, got {len(parts)}", path, lineno)
            doc_id, term, count_s = parts
            if not doc_id or not term:
                raise DataError("empty doc id or term", path, lineno)
            try:
                count = int(count_s.strip())
            except ValueError:
                raise DataError(f"malformed count {count_s!r}", path, lineno) from None
            if count < 0:
                raise DataError(f"negative count {count}", path, lineno)
            if count == 0:
                raise DataError("zero count (counts must be positive)", path, lineno)
            if term not in vocab_index:
                if fixed_vocab:
                    raise DataError(f"term {term!r} not in vocabulary", path, lineno)
                vocab_index[term] = len(vocab_index)
            r = doc_index.setdefault(doc_id, len(doc_index))
            c = vocab_index[term]
            if (r, c) in seen:
                raise DataError(f"duplicate entry for ({doc_id!r}, {term!r})", path, lineno)
            seen.add((r, c))
            rows.append(r)
            cols.append(c)
            vals.append(count)
    if not doc_index:
        raise DataError("no documents", path)
    counts = sp.csr_matrix(
        (np.asarray(vals, dtype=np.int64), (rows, cols)),
        shape=(len(doc_index), len(vocab_index)),
    )
    try:
        return DocumentTermMatrix(counts, list(doc_index), list(vocab_index))
    except DataError as exc:
        raise DataError(str(exc), path) from None


def save_dtm(dtm: DocumentTermMatrix, path: str | PathLike, write_vocab: bool = True) -> None:
    """Write ``dtm`` as triplets (rows in order, terms in column order)."""
    path = Path(path)
    mat = dtm.counts
    vocab = dtm.vocabulary
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for d, doc_id in enumerate(dtm.doc_ids):
            lo, hi = mat.indptr[d], mat.indptr[d + 1]
            for c, n in zip(mat.indices[lo:hi], mat.data[lo:hi]):
                fh.write(f"{doc_id}\t{vocab[c]}\t{int(n)}\n")
    if write_vocab:
        write_vocabulary(vocab, Path(str(path) + VOCAB_SUFFIX))


def read_vocabulary(path: str | PathLike) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh if line.rstrip("\n")]


def write_vocabulary(vocabulary: Sequence[str], path: str | PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for t in vocabulary:
            fh.write(t + "\n")


def read_documents(path: str | PathLike) -> list[tuple[str, str]]:
    """Read ``id<TAB>text`` lines for ingestion."""
    docs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            doc_id, sep, text = line.partition("\t")
            if not sep or not doc_id:
                raise DataError("expected 'id<TAB>text'", path, lineno)
            docs.append((doc_id, text))
    return docs


def read_stopwords(path: str | PathLike) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())
