import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "talbotlab.settings")
django.setup()
