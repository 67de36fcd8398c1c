"""Shared corpus loading for the test suite."""

from pathlib import Path

from defring import PresentedAlgebra, Representation, parse

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def read_corpus(name):
    return (CORPUS / name).read_text(encoding="utf-8")


def load_source(name):
    return parse(read_corpus(name), name)


def load_algebra(name):
    src = load_source(name)
    return src, PresentedAlgebra.from_source(src)


def load_module(name, module_name):
    src, algebra = load_algebra(name)
    return Representation.from_module_def(algebra, src.modules[module_name])
