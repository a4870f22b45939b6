import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "freegroup_measures.settings")
django.setup()
