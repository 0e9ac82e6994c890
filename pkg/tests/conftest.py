import pytest

from rbdkit import parse_spec

CASE_STUDY_TEXT = """\
pipeline "sixty-segment-pipeline"
series {
  group 30 seg_a exponential rate=0.0025
  group 20 seg_b exponential rate=0.0023
  group 10 seg_c exponential rate=0.015
}
"""

# Summed failure rate of the case-study pipeline: 30*0.0025 + 20*0.0023 + 10*0.015.
CASE_STUDY_TOTAL_RATE = 0.271


@pytest.fixture(scope="session")
def case_study_text() -> str:
    return CASE_STUDY_TEXT


@pytest.fixture(scope="session")
def case_study_doc():
    return parse_spec(CASE_STUDY_TEXT)


@pytest.fixture(scope="session")
def case_study_model(case_study_doc):
    return case_study_doc.model


@pytest.fixture(scope="session")
def case_study_path(tmp_path_factory) -> str:
    path = tmp_path_factory.mktemp("specs") / "pipeline60.rbd"
    path.write_text(CASE_STUDY_TEXT, encoding="utf-8")
    return str(path)
