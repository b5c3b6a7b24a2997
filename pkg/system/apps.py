from django.apps import AppConfig


class PowerSystemConfig(AppConfig):
    name = 'system'
    verbose_name = 'Power system assembly'
