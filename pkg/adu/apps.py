from django.apps import AppConfig


class AduConfig(AppConfig):
    name = 'adu'
