from pathlib import Path

import pytest

from ltlgen import load_model

MODELS = Path(__file__).resolve().parent.parent / "models"

# The go-to-the-about-screen-and-return function at the three detail levels.
GO_ABOUT_AND_BACK = (
    "X ([activity~Main] U ([activity~About] & X ([activity~About] U [activity~Main])))"
)

NEEDLE_A = "X ([activity~Vault1] & X ([activity~Vault2] & X [activity~Treasure]))"
NEEDLE_B = (
    "X (([actionType=click] & [activity~Vault1])"
    " & X (([actionType=click] & [activity~Vault2])"
    " & X ([actionType=click] & [activity~Treasure])))"
)
NEEDLE_C = (
    "X ((([actionType=click] & [actionDetail~Gamma]) & [activity~Vault1])"
    " & X ((([actionType=click] & [actionDetail~East]) & [activity~Vault2])"
    " & X (([actionType=click] & [actionDetail~Gold]) & [activity~Treasure])))"
)


@pytest.fixture(scope="session")
def chesswalk():
    return load_model(MODELS / "chesswalk_abstract.json")


@pytest.fixture(scope="session")
def needle():
    return load_model(MODELS / "needle.json")


@pytest.fixture(scope="session")
def flaky():
    return load_model(MODELS / "flaky.json")
