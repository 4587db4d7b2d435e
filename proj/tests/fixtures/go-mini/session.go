package minisdk

type Session struct {
	wire *Wire
}

func (s *Session) handleMessage(message Message) {
	switch message.(type) {
	case *PingRequest:
		s.respondEmpty(message)
	case *UnknownMessage:
		s.dropMessage(message)
	}
}

func (s *Session) respondEmpty(message Message) {
	s.wire.Push(Frame{Kind: "empty"})
}

func (s *Session) dropMessage(message Message) {
	s.wire.Drop(message)
}
