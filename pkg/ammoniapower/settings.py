"""
Django settings for the ammoniapower project.

The project hosts no web surface: Django provides settings, the cache layer,
management commands and the test runner; Celery distributes grid evaluations.
"""

import os

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def _env_flag(name, default):
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'ammoniapower-local-only-key')

DEBUG = _env_flag('DJANGO_DEBUG', False)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'thermo',
    'adu',
    'ice_gen',
    'pemfc',
    'recovery',
    'system',
    'explore',
]

MIDDLEWARE = []

# No database: every computation is a pure function of the run config.
DATABASES = {}

# Cache configuration
# 'default': Local Memory, or Redis when AMMONIAPOWER_REDIS_URL is set so
# that Celery workers share evaluated operating points.
REDIS_URL = os.environ.get('AMMONIAPOWER_REDIS_URL')

if REDIS_URL:
    CACHES = {
        "default": {
            "BACKEND": "django_redis.cache.RedisCache",
            "LOCATION": REDIS_URL,
            "OPTIONS": {
                "CLIENT_CLASS": "django_redis.client.DefaultClient",
                "IGNORE_EXCEPTIONS": False,
            }
        }
    }
else:
    CACHES = {
        "default": {
            "BACKEND": "django.core.cache.backends.locmem.LocMemCache",
            "LOCATION": "ammoniapower-evaluations",
            "OPTIONS": {
                "MAX_ENTRIES": 200000,
            }
        }
    }

# Cache TTL (Time To Live)
CACHE_TTL = 60 * 60  # 1 hour


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# Toolkit configuration
AMMONIAPOWER_DEFAULT_CONFIG = os.path.join(BASE_DIR, 'config', 'default.yaml')
AMMONIAPOWER_OUTPUT_DIR = os.environ.get(
    'AMMONIAPOWER_OUTPUT_DIR', os.path.join(BASE_DIR, 'output')
)


# Logging: results go to stdout, so log records go to stderr
LOG_LEVEL = os.environ.get('AMMONIAPOWER_LOG_LEVEL', 'INFO').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '[{asctime}] {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        app: {'handlers': ['console'], 'level': LOG_LEVEL, 'propagate': False}
        for app in ('thermo', 'adu', 'ice_gen', 'pemfc', 'recovery', 'system', 'explore')
    },
}


# Django REST Framework configuration (serializers only, no views)
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [],
    'UNAUTHENTICATED_USER': None,
    'COERCE_DECIMAL_TO_STRING': False,
}

# Celery configuration
# Eager by default: tasks execute in the calling process. Point the broker at
# Redis and disable eager mode to fan grid rows out to workers.
CELERY_BROKER_URL = os.environ.get('CELERY_BROKER_URL', 'redis://127.0.0.1:6379/2')
CELERY_RESULT_BACKEND = os.environ.get('CELERY_RESULT_BACKEND', 'redis://127.0.0.1:6379/2')
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = TIME_ZONE
CELERY_TASK_ALWAYS_EAGER = _env_flag('AMMONIAPOWER_TASK_ALWAYS_EAGER', True)
CELERY_TASK_EAGER_PROPAGATES = True
CELERY_TASK_TRACK_STARTED = True
CELERY_TASK_TIME_LIMIT = 30 * 60  # 30 minutes max per task
