from django.apps import AppConfig


class IceGenConfig(AppConfig):
    name = 'ice_gen'
