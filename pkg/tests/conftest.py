import pytest

from helpers import figure2_kml, figure2_respondent


@pytest.fixture
def fig2_kml() -> bytes:
    return figure2_kml()


@pytest.fixture
def fig2_respondent():
    return figure2_respondent()
