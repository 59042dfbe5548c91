"""Serialization for pipeline artifacts.

Every artifact is JSON or JSON Lines written with sorted keys and
explicit separators, so a rerun with the same inputs produces byte
identical files. The model artifact stores the integer count matrices
rather than the float estimates; phi and theta are recomputed exactly
from the counts on load. Averaged estimates (samples > 1) cannot be
recovered from the final counts, so they are stored explicitly.
"""

from __future__ import annotations

import io
import json
import os
from dataclasses import dataclass
from hashlib import sha256
from importlib.resources import files
from pathlib import Path

import numpy as np

from .corpus import Vocabulary, WordDocument
from .errors import DataError
from .lda import Hyperparams, TopicModel

MODEL_FORMAT = "negtopics-model-v1"


def default_data(name: str):
    """Packaged default data file, as a readable resource."""
    return files("negtopics") / "data" / name


def open_text(source: str | Path | None, default_name: str) -> io.StringIO:
    """Open a config-supplied path, or the packaged default when None."""
    if source is None:
        return io.StringIO(default_data(default_name).read_text(encoding="utf-8"))
    try:
        return io.StringIO(Path(source).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot read {source}: {exc}") from exc


def sha256_source(source: str | Path | None, default_name: str) -> str:
    if source is None:
        data = default_data(default_name).read_bytes()
    else:
        try:
            data = Path(source).read_bytes()
        except OSError as exc:
            raise DataError(f"cannot read {source}: {exc}") from exc
    return sha256(data).hexdigest()


def sha256_file(path: str | Path) -> str:
    h = sha256()
    try:
        with open(path, "rb") as fh:
            for chunk in iter(lambda: fh.read(1 << 20), b""):
                h.update(chunk)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    return h.hexdigest()


def dump_json(obj, path: str | Path, indent: int | None = 2) -> None:
    """Write JSON atomically with a deterministic layout."""
    text = json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=indent)
    write_text_atomic(path, text + "\n")


def write_text_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def jsonl_line(record: dict) -> str:
    return json.dumps(record, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def word_doc_record(doc: WordDocument) -> dict:
    return {
        "id": doc.id,
        "words": list(doc.words),
        "categories": sorted(doc.categories),
    }


def read_word_docs(path: str | Path) -> list[WordDocument]:
    """Load a cleaned-corpus artifact back into WordDocument records."""
    docs = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                    docs.append(
                        WordDocument(
                            id=obj["id"],
                            words=tuple(obj["words"]),
                            categories=frozenset(obj["categories"]),
                        )
                    )
                except (ValueError, KeyError, TypeError) as exc:
                    raise DataError(f"{path}:{lineno}: bad corpus record: {exc}") from exc
    except OSError as exc:
        raise DataError(f"cannot read corpus artifact {path}: {exc}") from exc
    return docs


def _sparse_rows(matrix: np.ndarray) -> list[list[list[int]]]:
    rows = []
    for row in matrix:
        (idx,) = np.nonzero(row)
        rows.append([idx.astype(int).tolist(), row[idx].astype(int).tolist()])
    return rows


def _dense_rows(rows: list, width: int) -> np.ndarray:
    out = np.zeros((len(rows), width), dtype=np.int64)
    for i, (idx, counts) in enumerate(rows):
        out[i, np.asarray(idx, dtype=np.int64)] = np.asarray(counts, dtype=np.int64)
    return out


def save_model(
    path: str | Path,
    hyper: Hyperparams,
    vocab: Vocabulary,
    doc_ids: list[str],
    n_kw: np.ndarray,
    n_dk: np.ndarray,
    phi: np.ndarray | None = None,
    theta: np.ndarray | None = None,
    include_n_dk: bool = True,
) -> None:
    payload = {
        "format": MODEL_FORMAT,
        "hyper": {
            "k": hyper.k,
            "alpha_sum": hyper.alpha_sum,
            "beta": hyper.beta,
            "iterations": hyper.iterations,
            "seed": hyper.seed,
            "samples": hyper.samples,
            "thinning": hyper.thinning,
        },
        "vocab_hash": vocab.content_hash(),
        "vocab_words": list(vocab.words),
        "vocab_counts": list(vocab.counts),
        "doc_ids": list(doc_ids),
        "n_k": n_kw.sum(axis=1).astype(int).tolist(),
        "n_kw": _sparse_rows(n_kw),
        "n_dk": _sparse_rows(n_dk) if include_n_dk else None,
    }
    if phi is not None:
        payload["phi"] = [row.tolist() for row in np.asarray(phi, dtype=np.float64)]
        payload["theta"] = [row.tolist() for row in np.asarray(theta, dtype=np.float64)]
    dump_json(payload, path, indent=None)


@dataclass
class LoadedModel:
    model: TopicModel
    vocab: Vocabulary
    doc_ids: list[str]
    n_kw: np.ndarray
    n_dk: np.ndarray | None


def load_model(path: str | Path) -> LoadedModel:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot read model artifact {path}: {exc}") from exc
    except ValueError as exc:
        raise DataError(f"model artifact {path} is not valid JSON: {exc}") from exc
    if payload.get("format") != MODEL_FORMAT:
        raise DataError(f"{path} is not a {MODEL_FORMAT} artifact")
    hyper = Hyperparams(**payload["hyper"])
    vocab = Vocabulary(payload["vocab_words"], payload["vocab_counts"])
    if vocab.content_hash() != payload["vocab_hash"]:
        raise DataError(f"vocabulary hash mismatch in {path}")
    vocab_size = len(vocab)
    n_kw = _dense_rows(payload["n_kw"], vocab_size)
    if n_kw.shape[0] != hyper.k:
        raise DataError(f"model {path} has {n_kw.shape[0]} topics, hyper says {hyper.k}")
    n_k = n_kw.sum(axis=1)
    if payload["n_k"] != n_k.astype(int).tolist():
        raise DataError(f"topic totals in {path} disagree with n_kw")
    n_dk = _dense_rows(payload["n_dk"], hyper.k) if payload.get("n_dk") else None
    if payload.get("phi") is not None:
        phi = np.asarray(payload["phi"], dtype=np.float64)
        theta = np.asarray(payload["theta"], dtype=np.float64)
    else:
        vbeta = vocab_size * hyper.beta
        phi = (n_kw + hyper.beta) / (n_k[:, None] + vbeta)
        if n_dk is None:
            theta = np.zeros((0, hyper.k))
        else:
            lengths = n_dk.sum(axis=1)
            theta = (n_dk + hyper.alpha_k) / (lengths[:, None] + hyper.alpha_sum)
    model = TopicModel(
        phi=phi, theta=theta, hyper=hyper, vocab_hash=payload["vocab_hash"]
    )
    return LoadedModel(
        model=model,
        vocab=vocab,
        doc_ids=list(payload["doc_ids"]),
        n_kw=n_kw,
        n_dk=n_dk,
    )


def load_manifest(out_dir: str | Path) -> dict:
    path = Path(out_dir) / "manifest.json"
    if not path.exists():
        return {"stages": {}, "inputs": {}}
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except ValueError as exc:
        raise DataError(f"manifest {path} is corrupt: {exc}") from exc


def save_manifest(out_dir: str | Path, manifest: dict) -> None:
    dump_json(manifest, Path(out_dir) / "manifest.json")
