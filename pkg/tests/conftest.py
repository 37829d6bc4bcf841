from hypothesis import HealthCheck, settings

# fixed example order so repeated runs of the suite see the same cases
settings.register_profile("default", derandomize=True, deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")
