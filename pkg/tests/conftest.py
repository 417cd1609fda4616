import os
import sys

from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

# enclosure tests trade speed for exactness; per-example deadlines only flake
settings.register_profile("spinorbit", deadline=None)
settings.load_profile("spinorbit")
