import pytest

from insight.ingest import build_index
from insight.refine import load_rules
from insight.sentiment import load_lexicon
from insight.synth import demo_corpus, demo_thread, labeled_corpus
from insight.textproc import load_stop_lists


@pytest.fixture(scope="session")
def stop_java():
    return load_stop_lists("java")


@pytest.fixture(scope="session")
def stop_android():
    return load_stop_lists("android")


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def rules():
    return load_rules()


@pytest.fixture(scope="session")
def showcase_index():
    bundle = demo_thread()
    index, _ = build_index(bundle.post_rows, bundle.comment_rows, "api-study")
    return index


@pytest.fixture(scope="session")
def labeled_bundle():
    return labeled_corpus()


@pytest.fixture(scope="session")
def labeled_index(labeled_bundle):
    index, _ = build_index(labeled_bundle.post_rows, labeled_bundle.comment_rows, "api-study")
    return index


@pytest.fixture(scope="session")
def demo_bundle():
    return demo_corpus()


@pytest.fixture(scope="session")
def demo_index(demo_bundle):
    index, _ = build_index(demo_bundle.post_rows, demo_bundle.comment_rows, "api-study")
    return index
