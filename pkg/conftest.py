"""Configure Django for pytest so the SimpleTestCase suites can run."""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "supermoduli.settings")
django.setup()
