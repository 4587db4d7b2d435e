"""Bearer header plumbing for outbound requests."""

import time

import httpx


class AuthContext:
    def __init__(self):
        self.current_tokens = None
        self.token_expiry_time = None

    def is_token_valid(self):
        """Check if current token is valid."""
        return bool(
            self.current_tokens
            and self.current_tokens.access_token
            and (not self.token_expiry_time or time.time() <= self.token_expiry_time)
        )


class BearerAuth(httpx.Auth):
    def __init__(self, context):
        self.context = context

    async def async_auth_flow(self, request):
        if self.context.is_token_valid():
            self._add_auth_header(request)
        yield request

    def _add_auth_header(self, request):
        """Add authorization header to request if we have valid tokens."""
        if self.context.current_tokens and self.context.current_tokens.access_token:
            request.headers["Authorization"] = f"Bearer {self.context.current_tokens.access_token}"
