import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'ammoniapower.settings')
django.setup()
