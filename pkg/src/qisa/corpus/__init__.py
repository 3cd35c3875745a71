"""Bundled example programs and the data files they reference."""

from __future__ import annotations

import os
from importlib import resources

from ..errors import QisaError

CORPUS = {
    "shor_9_4": ("shor_9_4.qvm",),
    "grover_64": ("grover_64.qvm", "grover_64_address.tbl"),
    "dj_constant": ("dj_constant.qvm", "dj_constant.tbl"),
    "dj_balanced": ("dj_balanced.qvm", "dj_balanced.tbl"),
    "anneal_demo": ("anneal_demo.qvm", "anneal_demo.ising"),
}


class UnknownCorpusName(QisaError, KeyError):
    pass


def _files(name: str) -> tuple[str, ...]:
    try:
        return CORPUS[name]
    except KeyError:
        raise UnknownCorpusName(f"unknown corpus program {name!r}; choose from {', '.join(CORPUS)}") from None


def source(name: str) -> str:
    """Text of the bundled ``.qvm`` program."""
    return resources.files(__name__).joinpath(_files(name)[0]).read_text(encoding="utf-8")


def path(name: str) -> str:
    """Filesystem path of the bundled program (its data files sit beside it)."""
    return str(resources.files(__name__).joinpath(_files(name)[0]))


def write_corpus(name: str, directory: str = ".") -> list[str]:
    """Copy a program and its data files into ``directory``; returns the written paths."""
    files = _files(name)
    os.makedirs(directory, exist_ok=True)
    written = []
    for fname in files:
        target = os.path.join(directory, fname)
        data = resources.files(__name__).joinpath(fname).read_bytes()
        with open(target, "wb") as fh:
            fh.write(data)
        written.append(target)
    return written
