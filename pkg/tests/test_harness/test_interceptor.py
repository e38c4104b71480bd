from rctee.harness import Interceptor, Wiretap, rewrite, substitute
from rctee.wire import (
    LocalConnection,
    MessageType,
    Ping,
    Pong,
    encode,
    message_handler,
)


def _pong_server():
    def handle(message, state):
        return [Pong(message.sealed)]

    return LocalConnection(message_handler(handle))


def test_wiretap_records_both_directions():
    tap = Wiretap()
    link = Interceptor(_pong_server(), "device", tap)

    assert link.request(Ping(b"x")) == Pong(b"x")
    assert [(f.link, f.direction) for f in tap.frames] == [
        ("device", "out"),
        ("device", "in"),
    ]
    assert tap.last(MessageType.PONG) == encode(Pong(b"x"))
    assert tap.contains(b"x")

    tap.clear()
    assert tap.frames == []


def test_hooks_rewrite_and_drop():
    link = Interceptor(_pong_server(), "device")
    link.on_send(rewrite(Ping, lambda m: Ping(m.sealed + b"!")))
    link.on_receive(substitute(MessageType.PONG, encode(Pong(b"forged"))))

    assert link.request(Ping(b"a")) == Pong(b"forged")
    assert link.tap.of_type(MessageType.PING)[0].frame == encode(Ping(b"a!"))

    link.clear_hooks()
    link.on_send(lambda frame: None)
    link.send(Ping(b"b"))
    assert len(link.tap.of_type(MessageType.PING)) == 1


def test_inject_bypasses_hooks():
    link = Interceptor(_pong_server(), "device")
    link.on_send(lambda frame: None)

    link.inject(encode(Ping(b"z")))

    assert link.receive() == Pong(b"z")
