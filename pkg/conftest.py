"""Django setup for running the test suite under pytest (mirrors manage.py)."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'cknlab.settings')
django.setup()
