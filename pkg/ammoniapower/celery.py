"""
Celery configuration for the ammonia power-system toolkit
Runs efficiency-map rows and sizing sweeps on workers, or in-process when eager
"""
import os
from celery import Celery

# Set default Django settings module
os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'ammoniapower.settings')

app = Celery('ammoniapower')

# Load config from Django settings, using CELERY_ prefix
app.config_from_object('django.conf:settings', namespace='CELERY')

# Auto-discover tasks in all installed apps
app.autodiscover_tasks()
