import os

import hypothesis
import numpy as np
import pytest

from services.verification import VerificationService
from utils.config import ENV_VARS, Config

np.seterr(all="warn")

hypothesis.settings.register_profile("fast", max_examples=10)
hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch, tmp_path):
    """Each test starts without K3ML_* variables, config file or singletons"""
    for var in ENV_VARS.values():
        monkeypatch.delenv(var, raising=False)
    monkeypatch.chdir(tmp_path)
    Config.reset()
    VerificationService.reset()
    yield
    Config.reset()
    VerificationService.reset()
