import os

from hypothesis import HealthCheck, settings

# "default" keeps the property tests snappy for local runs and CI; flip to
# "thorough" (DOUBLEWORD_HYPOTHESIS_PROFILE=thorough) before cutting a release.
settings.register_profile(
    "default",
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile(
    "thorough",
    max_examples=2000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("DOUBLEWORD_HYPOTHESIS_PROFILE", "default"))
