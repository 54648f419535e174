from hypothesis import settings

# Timing varies too much on shared machines for per-example deadlines.
settings.register_profile("default", deadline=None)
settings.load_profile("default")
