from django.apps import AppConfig


class PemfcConfig(AppConfig):
    name = 'pemfc'
