import hypothesis

# solver-backed properties can be slow on first call (numpy warmup);
# wall-clock deadlines only produce flaky failures here
hypothesis.settings.register_profile("default", deadline=None, max_examples=50)
hypothesis.settings.load_profile("default")
